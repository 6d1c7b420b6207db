"""Truncated Segal-Bargmann space and the reproducing-kernel projection.

The kernel itself is an infinite sum that only converges strongly, so it is
never stored; everything goes through its action ``project_K``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qalgebra import Element, Monomial
from .scalars import EXACT, FLOAT, backend_of
from .pairing import ratio_fn
from .weights import WeightSequence


def _sqrt_weight(w: WeightSequence, j: int) -> float:
    return math.sqrt(w(j))


def phi(j: int, w: WeightSequence, q=1.0) -> Element:
    """Orthonormal basis vector ``w_j**-0.5 * theta^j`` (floating backend)."""
    if j < 0:
        raise ValueError("phi_j needs j >= 0")
    return Element.monomial(j, 0, complex(q), 1.0 / _sqrt_weight(w, j))


def phi_exact(j: int, w: WeightSequence, q=1):
    """``(w_j, theta^j)``: phi_j before the square root, for exact checks."""
    if j < 0:
        raise ValueError("phi_j needs j >= 0")
    return w(j), Element.monomial(j, 0, q)


def embed(f, w: WeightSequence | None = None, q=None) -> Element:
    """Functional calculus ``(f_0, f_1, ...) -> sum_j f_j theta^j``.

    The backend follows the coefficients unless ``q`` is given.
    """
    f = list(f)
    if q is None:
        q = 1.0 if any(backend_of(c) == FLOAT for c in f) else 1
    return Element({Monomial(j, 0): c for j, c in enumerate(f)}, q)


def project_K(F: Element, w: WeightSequence) -> Element:
    """``P_K(theta^a thetabar^b) = (w_a / w_(a-b)) theta^(a-b)``, zero when ``a < b``."""
    ratio = ratio_fn(w, F.backend)
    out = []
    for (a, b), c in F.terms.items():
        if a < b:
            continue
        out.append((Monomial(a - b, 0), c * ratio(a, a - b)))
    return Element(out, F.q)


def restricted_matrix(w: WeightSequence, N: int) -> np.ndarray:
    """Matrix of ``P_K`` on ``span{theta^0..theta^(N-1)}`` (exact if ``w`` is)."""
    backend = EXACT if w.exact else FLOAT
    q = 1 if backend == EXACT else 1.0
    M = np.empty((N, N), dtype=object if backend == EXACT else complex)
    for a in range(N):
        image = project_K(Element.monomial(a, 0, q), w)
        for b in range(N):
            M[b, a] = image.coeff(b, 0)
    return M


@dataclass(frozen=True)
class FockVector:
    """``sum_a coeffs[a] * phi_a`` in the span of ``phi_0..phi_(N-1)``."""

    coeffs: np.ndarray
    weights: WeightSequence

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("FockVector needs a nonempty 1-d coefficient vector")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self) -> int:
        return self.coeffs.size

    @classmethod
    def basis(cls, a: int, N: int, w: WeightSequence) -> "FockVector":
        if not 0 <= a < N:
            raise ValueError(f"basis index {a} outside 0..{N - 1}")
        c = np.zeros(N, dtype=complex)
        c[a] = 1
        return cls(c, w)

    @classmethod
    def from_element(cls, f: Element, N: int, w: WeightSequence) -> "FockVector":
        """Coordinates of ``f`` in the phi basis; ``f`` must lie in Pre(theta) below degree N."""
        if not f.in_pre_theta():
            raise ValueError("element has thetabar powers; project it first")
        c = np.zeros(N, dtype=complex)
        for (j, _), coeff in f.terms.items():
            if j >= N:
                raise ValueError(f"theta^{j} lies outside the truncation N={N}")
            c[j] = complex(coeff) * _sqrt_weight(w, j)
        return cls(c, w)

    def to_element(self, q=1.0) -> Element:
        return Element(
            {Monomial(a, 0): c / _sqrt_weight(self.weights, a) for a, c in enumerate(self.coeffs)},
            complex(q),
        )

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))
