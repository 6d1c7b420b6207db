"""The weighted inner product, Gram matrices, sectors and degeneracy scans."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .qalgebra import Element, Monomial
from .scalars import EXACT, BackendMismatch, GaussianRational, format_fraction, format_scalar
from .weights import WeightSequence

CERTIFIED_NONDEGENERATE = "CERTIFIED_NONDEGENERATE"
CANDIDATE_WITNESS = "CANDIDATE_WITNESS"

SVD_RTOL = 1e-10


def weight_fn(w: WeightSequence, backend: str):
    """Weight evaluator returning values in ``backend``.

    Exact elements cannot be paired with floating weights.
    """
    if backend == EXACT:
        if not w.exact:
            raise BackendMismatch(f"exact computation requested with floating weights {w.spec()}")
        return lambda n: GaussianRational(w(n))
    return lambda n: complex(float(w(n)))


def ratio_fn(w: WeightSequence, backend: str):
    """``(n, m) -> w_n / w_m`` in ``backend``; see :meth:`WeightSequence.ratio`."""
    weight_fn(w, backend)
    if backend == EXACT:
        return lambda n, m: GaussianRational(w.ratio(n, m))
    return lambda n, m: complex(float(w.ratio(n, m)))


def inner(f: Element, g: Element, w: WeightSequence):
    """``<f, g>_w``, anti-linear in ``f``.

    On monomials ``<theta^a thetabar^b, theta^c thetabar^d> = w_(a+d)`` if
    ``a + d == b + c`` and 0 otherwise.  The deformation parameter plays no
    role, so ``f`` and ``g`` may carry different ``q``.
    """
    if f.backend != g.backend:
        raise BackendMismatch("inner product of elements with different backends")
    wt = weight_fn(w, f.backend)
    total = GaussianRational(0) if f.backend == EXACT else 0j
    # bucket g by sector so the double loop only visits matching pairs
    by_sector: dict[int, list] = {}
    for (c, d), cg in g.terms.items():
        by_sector.setdefault(c - d, []).append((c, d, cg))
    for (a, b), cf in f.terms.items():
        for c, d, cg in by_sector.get(a - b, ()):
            total = total + cf.conjugate() * cg * wt(a + d)
    return total


def gram(basis, w: WeightSequence) -> np.ndarray:
    """Gram matrix ``G[i, j] = <basis[i], basis[j]>_w``.

    Exact bases give an object array of GaussianRational entries, floating
    ones a complex128 array.  Hermitian symmetry is checked on the way out.
    """
    basis = list(basis)
    if not basis:
        raise ValueError("gram needs a nonempty basis")
    n = len(basis)
    exact = basis[0].backend == EXACT
    G = np.empty((n, n), dtype=object if exact else complex)
    for i in range(n):
        for j in range(i, n):
            G[i, j] = inner(basis[i], basis[j], w)
            if j != i:
                G[j, i] = inner(basis[j], basis[i], w)
    for i in range(n):
        for j in range(i, n):
            if exact and G[i, j] != G[j, i].conjugate():
                raise ArithmeticError("Gram matrix is not Hermitian")
    if not exact and not np.allclose(G, G.conj().T, rtol=1e-12, atol=0):
        raise ArithmeticError("Gram matrix is not Hermitian")
    return G


def sector_of(m: Monomial) -> int:
    return m[0] - m[1]


def maxdeg(m: Monomial) -> int:
    return max(m[0], m[1])


def epsilon(n: int, r: int) -> Monomial:
    """The unique monomial of sector ``n`` with max-degree ``r``."""
    if r < abs(n):
        raise ValueError(f"max-degree {r} is below |n| = {abs(n)}")
    if n >= 0:
        return Monomial(r, r - n)
    return Monomial(r + n, r)


def aw_monomials(D: int) -> list[Monomial]:
    """All anti-Wick monomials with max-degree <= D, ordered by (maxdeg, j, k)."""
    out = [Monomial(j, k) for j in range(D + 1) for k in range(D + 1)]
    return sorted(out, key=lambda m: (max(m), m.j, m.k))


# --- Hankel slices and the non-degeneracy scan ------------------------------


@dataclass(frozen=True)
class HankelSlice:
    """``M[r, s] = w_(r + s + m)`` for ``0 <= r < R`` and ``0 <= s <= s_max``.

    Column ``s`` is the vector ``W_(R, s + m)`` of the non-degeneracy criterion.
    """

    m: int
    R: int
    s_max: int
    entries: tuple

    @classmethod
    def build(cls, w: WeightSequence, m: int, R: int, s_max: int) -> "HankelSlice":
        rows = tuple(tuple(w(r + s + m) for s in range(s_max + 1)) for r in range(R))
        return cls(m, R, s_max, rows)

    @property
    def exact(self) -> bool:
        return all(isinstance(x, Fraction) for row in self.entries for x in row)

    def column(self, s: int) -> tuple:
        return tuple(row[s] for row in self.entries)


def _rref(rows: list[list[Fraction]]):
    """Reduced row echelon form over Q. Returns (matrix, pivot columns)."""
    A = [list(r) for r in rows]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        A[r] = [x / piv for x in A[r]]
        for i in range(nrows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return A, pivots


def exact_rank(rows) -> int:
    return len(_rref([[Fraction(x) for x in row] for row in rows])[1])


def _exact_left_null_vector(rows) -> list[Fraction] | None:
    """A nonzero x with sum_r x[r] * rows[r][s] == 0 for every s, or None."""
    R = len(rows)
    transposed = [[Fraction(rows[r][s]) for r in range(R)] for s in range(len(rows[0]))]
    A, pivots = _rref(transposed)
    free = [c for c in range(R) if c not in pivots]
    if not free:
        return None
    f0 = free[0]
    x = [Fraction(0)] * R
    x[f0] = Fraction(1)
    for row, pc in zip(A, pivots):
        x[pc] = -row[f0]
    lead = next(v for v in x if v != 0)
    return [v / lead for v in x]


@dataclass(frozen=True)
class ScanResult:
    m: int
    R: int
    verdict: str
    rank: int
    horizon: int
    witness: tuple | None = None
    verified: bool | None = None

    def to_json(self) -> dict:
        out = {"m": self.m, "R": self.R, "verdict": self.verdict, "rank": self.rank,
               "horizon": self.horizon}
        if self.witness is not None:
            out["witness"] = [_fmt_num(a) for a in self.witness]
            out["verified"] = self.verified
        return out


@dataclass(frozen=True)
class DegeneracyReport:
    """Per-(m, R) verdicts.  Every verdict is scoped to the scanned horizon."""

    m_max: int
    R_max: int
    S_max: int
    weights: str
    results: tuple = field(default_factory=tuple)

    def get(self, m: int, R: int) -> ScanResult:
        for res in self.results:
            if res.m == m and res.R == R:
                return res
        raise KeyError((m, R))

    def to_json(self) -> dict:
        return {
            "params": {"m_max": self.m_max, "R_max": self.R_max, "S_max": self.S_max,
                       "weights": self.weights, "scope": "finite horizon; no global verdict"},
            "results": [r.to_json() for r in self.results],
        }


def _fmt_num(x) -> str:
    if isinstance(x, Fraction):
        return format_fraction(x)
    return format_scalar(x)


def witness_element(result: ScanResult, q=1, sector: int | None = None) -> Element:
    """``f = sum_r a_r epsilon_r`` in sector ``+m`` (or ``sector``), ``a_r = conj(A_r)``."""
    if result.witness is None:
        raise ValueError("no witness for a certified pair")
    n = result.m if sector is None else sector
    if abs(n) != result.m:
        raise ValueError(f"sector {n} does not match |n| = {result.m}")
    terms = {}
    for rr, a in enumerate(result.witness):
        mono = epsilon(n, result.m + rr)
        terms[mono] = a.conjugate() if isinstance(a, complex) else a
    if any(isinstance(a, (float, complex)) for a in result.witness):
        q = complex(q)
    return Element(terms, q)


def _scan_pair(w: WeightSequence, m: int, R: int, S_max: int) -> ScanResult:
    sl = HankelSlice.build(w, m, R, S_max)
    if sl.exact:
        rank = exact_rank(sl.entries)
        if rank == R:
            return ScanResult(m, R, CERTIFIED_NONDEGENERATE, rank, S_max)
        A = _exact_left_null_vector(sl.entries)
        ok = all(sum(a * x for a, x in zip(A, sl.column(s))) == 0 for s in range(S_max + 1))
        return ScanResult(m, R, CANDIDATE_WITNESS, rank, S_max, tuple(A), ok)
    M = np.array(sl.entries, dtype=float)
    U, sv, _ = np.linalg.svd(M)
    rank = int(np.sum(sv > SVD_RTOL * sv[0])) if sv.size else 0
    if rank == R:
        return ScanResult(m, R, CERTIFIED_NONDEGENERATE, rank, S_max)
    A = U[:, -1]
    A = A / A[np.flatnonzero(np.abs(A) > SVD_RTOL)[0]]
    A[np.abs(A) < 1e-12] = 0.0
    resid = np.abs(A @ M)
    ok = bool(np.all(resid <= SVD_RTOL * np.abs(M).max() * np.abs(A).sum()))
    return ScanResult(m, R, CANDIDATE_WITNESS, rank, S_max, tuple(float(a) for a in A), ok)


def nondegeneracy_scan(w: WeightSequence, m_max: int, R_max: int, S_max: int) -> DegeneracyReport:
    """Check whether the vectors ``W_(R,s)``, ``s`` up to the horizon, span C^R.

    Rank R certifies the pair (m, R).  A rank deficit yields a null vector
    that is orthogonal to every scanned ``W_(R,s)``; it is only a candidate
    degeneracy witness since later ``s`` are not examined.
    """
    if m_max < 0 or R_max < 1 or S_max < 0:
        raise ValueError("need m_max >= 0, R_max >= 1, S_max >= 0")
    if S_max + 1 < R_max:
        warnings.warn(
            f"S_max={S_max} gives fewer than R_max={R_max} columns; large R cannot be certified",
            stacklevel=2,
        )
    results = tuple(
        _scan_pair(w, m, R, S_max) for m in range(m_max + 1) for R in range(1, R_max + 1)
    )
    return DegeneracyReport(m_max, R_max, S_max, w.spec(), results)


# --- definiteness -----------------------------------------------------------


@dataclass(frozen=True)
class DefinitenessReport:
    D: int
    basis: tuple
    min_eigenvalue: float
    witness: Element | None = None
    witness_norm2: float | None = None

    def to_json(self) -> dict:
        out = {"D": self.D, "dim": len(self.basis), "min_eigenvalue": self.min_eigenvalue}
        if self.witness is not None:
            out["witness"] = [
                {"j": m.j, "k": m.k, "re": c.real, "im": c.imag}
                for m, c in self.witness.sorted_terms()
            ]
            out["witness_norm2"] = self.witness_norm2
        return out


def definiteness_probe(w: WeightSequence, D: int, q=1.0) -> DefinitenessReport:
    """Least eigenvalue of the Gram matrix of all AW monomials with max-degree <= D.

    A negative eigenvalue comes back with its eigenvector as an element
    ``f`` (floating backend) satisfying ``<f, f>_w < 0``.
    """
    if D < 0:
        raise ValueError("D must be >= 0")
    basis = aw_monomials(D)
    q = complex(q)
    G = gram([Element.monomial(m.j, m.k, q) for m in basis], w)
    vals, vecs = np.linalg.eigh(G)
    lam = float(vals[0])
    if lam >= 0:
        return DefinitenessReport(D, tuple(basis), lam)
    v = vecs[:, 0]
    f = Element({m: complex(c) for m, c in zip(basis, v) if abs(c) > 1e-14}, q)
    return DefinitenessReport(D, tuple(basis), lam, f, inner(f, f, w).real)
