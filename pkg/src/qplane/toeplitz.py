"""Toeplitz operators as truncated matrices.

``T_g`` acts on ``span{phi_0..phi_(N-1)}``.  The matrix is stored in the
unnormalised monomial basis ``theta^a`` so that rational weights give exact
entries; the orthonormal-basis matrix differs from it by the diagonal
similarity ``diag(w_a**0.5)`` and is available as :attr:`TruncatedOperator.matrix`.

Mass pushed past index ``N - 1`` is dropped.  ``margin`` counts the trailing
columns that truncation may have altered, so identities between operators
are compared on the leading ``N - margin`` columns only.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bargmann import FockVector
from .pairing import ratio_fn, weight_fn
from .qalgebra import Element, deformation, star
from .scalars import EXACT, FLOAT, GaussianRational, format_scalar, to_backend
from .textio import element_to_json
from .weights import WeightSequence, ccr_weights

BOUNDED_CANDIDATE = "BOUNDED_CANDIDATE"
DIVERGING = "DIVERGING"
INCONCLUSIVE = "INCONCLUSIVE"
COMPACT_CANDIDATE = "COMPACT_CANDIDATE"
NOT_COMPACT_CANDIDATE = "NOT_COMPACT_CANDIDATE"


class DimensionMismatch(ValueError):
    pass


def _zeros(N: int, backend: str) -> np.ndarray:
    if backend == EXACT:
        M = np.empty((N, N), dtype=object)
        M.fill(GaussianRational(0))
        return M
    return np.zeros((N, N), dtype=complex)


def _identity(N: int, backend: str) -> np.ndarray:
    M = _zeros(N, backend)
    for a in range(N):
        M[a, a] = GaussianRational(1) if backend == EXACT else 1.0
    return M


def _matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product; the exact path skips zeros since Toeplitz matrices are shifts."""
    if A.dtype != object:
        return A @ B
    N = A.shape[0]
    cols = [[(i, A[i, k]) for i in range(N) if A[i, k]] for k in range(N)]
    C = _zeros(N, EXACT)
    for j in range(N):
        for k in range(N):
            b = B[k, j]
            if b:
                for i, a in cols[k]:
                    C[i, j] = C[i, j] + a * b
    return C


@dataclass(frozen=True, eq=False)
class TruncatedOperator:
    """N x N truncation of a Toeplitz (or derived) operator.

    ``coords[b, a]`` is the coefficient of ``theta^b`` in ``T theta^a``.
    """

    coords: np.ndarray
    weights: WeightSequence
    symbol: Element | None = None
    margin: int = 0

    def __post_init__(self):
        if self.coords.ndim != 2 or self.coords.shape[0] != self.coords.shape[1]:
            raise ValueError("operator matrix must be square")
        self.coords.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.coords.shape[0]

    @property
    def backend(self) -> str:
        return EXACT if self.coords.dtype == object else FLOAT

    @property
    def interior(self) -> int:
        """Number of leading columns unaffected by truncation."""
        return max(self.dim - self.margin, 0)

    @property
    def matrix(self) -> np.ndarray:
        """Float matrix ``<phi_b, T phi_a>`` in the orthonormal basis."""
        s = np.array([math.sqrt(self.weights(a)) for a in range(self.dim)])
        return np.array(self.coords, dtype=complex) * s[:, None] / s[None, :]

    def phi_entry(self, b: int, a: int):
        """Exact orthonormal-basis entry as ``(c, r)`` meaning ``c * sqrt(r)``."""
        return self.coords[b, a], Fraction(self.weights(b)) / Fraction(self.weights(a))

    def __matmul__(self, other):
        return compose(self, other)

    def __add__(self, other):
        _check_pair(self, other)
        sym = None
        if self.symbol is not None and other.symbol is not None:
            sym = self.symbol + other.symbol
        return TruncatedOperator(self.coords + other.coords, self.weights, sym,
                                 max(self.margin, other.margin))

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, alpha) -> "TruncatedOperator":
        alpha = to_backend(alpha, self.backend)
        sym = self.symbol * alpha if self.symbol is not None else None
        return TruncatedOperator(self.coords * alpha, self.weights, sym, self.margin)

    def diagonal(self, offset: int = 0) -> list:
        """Entries ``coords[a + offset, a]`` (monomial basis)."""
        N = self.dim
        return [self.coords[a + offset, a] for a in range(N) if 0 <= a + offset < N]

    def to_json(self) -> dict:
        out = {
            "dim": self.dim,
            "weights": self.weights.spec(),
            "symbol": element_to_json(self.symbol) if self.symbol is not None else None,
            "margin": self.margin,
            "basis": "phi",
            "entries_row_major": [[z.real, z.imag] for z in self.matrix.ravel()],
        }
        if self.backend == EXACT:
            out["monomial_entries_row_major"] = [
                [format_scalar(z.re), format_scalar(z.im)] for z in self.coords.ravel()
            ]
        return out


def _check_pair(A: TruncatedOperator, B: TruncatedOperator):
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimensions differ: {A.dim} vs {B.dim}")
    if A.weights != B.weights:
        raise ValueError("operators built from different weight sequences")
    if A.backend != B.backend:
        raise TypeError("operators use different scalar backends")


def interior_equal(A: TruncatedOperator, B: TruncatedOperator, atol: float = 0.0) -> bool:
    """Compare on the leading columns unaffected by either operator's truncation."""
    _check_pair(A, B)
    n = min(A.interior, B.interior)
    if A.backend == EXACT and atol == 0:
        return bool(np.all(A.coords[:, :n] == B.coords[:, :n]))
    return bool(np.allclose(A.matrix[:, :n], B.matrix[:, :n], rtol=0, atol=atol))


def toeplitz_monomial(i: int, j: int, w: WeightSequence, N: int,
                      backend: str | None = None) -> TruncatedOperator:
    """``T_(theta^i thetabar^j)``: ``theta^a -> (w_(i+a) / w_(i+a-j)) theta^(i+a-j)``.

    In the orthonormal basis this is the weighted shift
    ``phi_a -> w_(i+a) / sqrt(w_a w_(i+a-j)) phi_(i+a-j)``.
    """
    if i < 0 or j < 0:
        raise ValueError("exponents must be >= 0")
    if N < 1:
        raise ValueError("truncation dimension must be >= 1")
    if backend is None:
        backend = EXACT if w.exact else FLOAT
    ratio = ratio_fn(w, backend)
    M = _zeros(N, backend)
    for a in range(N):
        b = i + a - j
        if 0 <= b < N:
            M[b, a] = ratio(i + a, b)
    q = 1 if backend == EXACT else 1.0
    return TruncatedOperator(M, w, Element.monomial(i, j, q), max(i, j))


def toeplitz(g: Element, w: WeightSequence, N: int) -> TruncatedOperator:
    """``T_g = P_K M_g`` truncated to N, by linearity over the terms of ``g``."""
    backend = g.backend
    weight_fn(w, backend)  # rejects exact symbols with floating weights
    M = _zeros(N, backend)
    margin = 0
    for (i, j), c in g.terms.items():
        M = M + toeplitz_monomial(i, j, w, N, backend).coords * c
        margin = max(margin, i, j)
    return TruncatedOperator(M, w, g, margin)


def apply(T: TruncatedOperator, v: FockVector) -> FockVector:
    if v.dim != T.dim:
        raise DimensionMismatch(f"vector has dim {v.dim}, operator {T.dim}")
    if v.weights != T.weights:
        raise ValueError("vector and operator use different weights")
    return FockVector(T.matrix @ v.coeffs, T.weights)


def compose(A: TruncatedOperator, B: TruncatedOperator) -> TruncatedOperator:
    """``A B`` (B acts first).  Margins add."""
    _check_pair(A, B)
    return TruncatedOperator(_matmul(A.coords, B.coords), A.weights, None, A.margin + B.margin)


def adjoint(T: TruncatedOperator) -> TruncatedOperator:
    """Hilbert-space adjoint.

    In the monomial basis this is ``W^-1 M^H W`` with ``W = diag(w_a)``;
    the orthonormal-basis matrix is simply conjugate-transposed.
    """
    N = T.dim
    if T.backend == EXACT:
        wt = [GaussianRational(T.weights(a)) for a in range(N)]
    else:
        wt = [complex(float(T.weights(a))) for a in range(N)]
    M = _zeros(N, T.backend)
    for b in range(N):
        for a in range(N):
            z = T.coords[a, b]
            if z != 0:
                M[b, a] = z.conjugate() * wt[a] / wt[b]
    sym = star(T.symbol) if T.symbol is not None else None
    return TruncatedOperator(M, T.weights, sym, T.margin)


def q_commutator(A: TruncatedOperator, B: TruncatedOperator, r) -> TruncatedOperator:
    """``[A, B]_r = AB - r BA``."""
    _check_pair(A, B)
    r = to_backend(r, A.backend)
    AB, BA = compose(A, B), compose(B, A)
    return TruncatedOperator(AB.coords - BA.coords * r, A.weights, None, AB.margin)


def identity(w: WeightSequence, N: int, backend: str | None = None) -> TruncatedOperator:
    backend = backend or (EXACT if w.exact else FLOAT)
    q = 1 if backend == EXACT else 1.0
    return TruncatedOperator(_identity(N, backend), w, Element.scalar(1, q), 0)


def ccr_residual(q, w0=1, N: int = 16, weights: WeightSequence | None = None):
    """Largest entry of ``T_thetabar T_theta - q**-1 T_theta T_thetabar - I`` on the leading N x N block.

    Built at dimension N + 1 so the block is free of truncation effects.
    Exact inputs give an exact (Fraction) result.  ``weights`` overrides the
    CCR family, which is how a wrong choice of weights is diagnosed.
    """
    q = deformation(q)
    w = weights if weights is not None else ccr_weights(q, w0)
    backend = EXACT if (w.exact and isinstance(q, GaussianRational)) else FLOAT
    r = 1 / q if backend == EXACT else 1 / complex(q)
    ann = toeplitz_monomial(0, 1, w, N + 1, backend)
    cre = toeplitz_monomial(1, 0, w, N + 1, backend)
    C = q_commutator(ann, cre, r).coords - _identity(N + 1, backend)
    block = C[:N, :N]
    if backend == EXACT:
        worst = Fraction(0)
        for z in block.ravel():
            if z.im == 0:
                worst = max(worst, abs(z.re))
            else:
                worst = max(worst, Fraction(math.sqrt(z.abs2())))
        return worst
    return float(np.max(np.abs(block)))


# --- boundedness / compactness of monomial symbols ---------------------------


def shift_weights(i: int, j: int, w: WeightSequence, A_max: int) -> list[float]:
    """``c_a = w_(i+a) / sqrt(w_a w_(i+a-j))`` for ``a = 0..A_max``; 0 where ``i+a-j < 0``."""
    out = []
    for a in range(A_max + 1):
        b = i + a - j
        if b < 0:
            out.append(0.0)
            continue
        out.append(math.sqrt(w.ratio(i + a, a) * w.ratio(i + a, b)))
    return out


def _tail(c: list[float]) -> list[float]:
    return c[-max(2, len(c) // 4):]


def _nonincreasing(xs) -> bool:
    return all(y <= x for x, y in zip(xs, xs[1:]))


def _nondecreasing(xs) -> bool:
    return all(y >= x for x, y in zip(xs, xs[1:]))


@dataclass(frozen=True)
class NormBound:
    """Max of the shift weights over ``0..A_max``; the verdict is horizon-scoped."""

    sup_estimate: float
    attained_at: int
    verdict: str
    values: tuple
    horizon: int

    def to_json(self) -> dict:
        return {"sup_estimate": self.sup_estimate, "attained_at": self.attained_at,
                "verdict": self.verdict, "horizon": self.horizon}


def norm_bound_monomial(i: int, j: int, w: WeightSequence, A_max: int) -> NormBound:
    if A_max < 1:
        raise ValueError("A_max must be >= 1")
    c = shift_weights(i, j, w, A_max)
    top = max(c)
    at = c.index(top)
    tail = _tail(c)
    if all(y > x for x, y in zip(tail, tail[1:])) and at == A_max:
        verdict = DIVERGING
    elif _nonincreasing(tail):
        verdict = BOUNDED_CANDIDATE
    else:
        verdict = INCONCLUSIVE
    return NormBound(top, at, verdict, tuple(c), A_max)


def compactness_probe(i: int, j: int, w: WeightSequence, A_max: int, tol: float = 1e-6) -> str:
    """Heuristic over the last quarter of ``0..A_max``.

    Small and non-increasing tail: compact candidate.  Non-decreasing tail
    staying at or above ``tol``: not compact.  Anything else is inconclusive.
    """
    if A_max < 4:
        raise ValueError("A_max must be >= 4")
    tail = _tail(shift_weights(i, j, w, A_max))
    if all(x < tol for x in tail) and _nonincreasing(tail):
        return COMPACT_CANDIDATE
    if _nondecreasing(tail) and min(tail) >= tol:
        return NOT_COMPACT_CANDIDATE
    return INCONCLUSIVE


def norm_lower_bound(T: TruncatedOperator) -> float:
    """Largest singular value of the truncated orthonormal-basis matrix.

    Truncation is a compression, so this never exceeds the true norm.
    """
    return float(np.linalg.norm(T.matrix, 2))


def diagonals_csv(T: TruncatedOperator) -> str:
    """CSV ``offset,a,re,im`` of every nonzero orthonormal-basis entry, by diagonal."""
    M = T.matrix
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["offset", "a", "re", "im"])
    N = T.dim
    for offset in range(-(N - 1), N):
        for a in range(N):
            b = a + offset
            if 0 <= b < N and M[b, a] != 0:
                out.writerow([offset, a, repr(float(M[b, a].real)), repr(float(M[b, a].imag))])
    return buf.getvalue()
