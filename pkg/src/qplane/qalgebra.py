"""Normal-ordered arithmetic in the complex quantum plane.

Elements are finite linear combinations of anti-Wick monomials
``theta^j thetabar^k`` subject to ``theta thetabar = q thetabar theta``.
Every element carries its deformation parameter ``q`` and the scalar
backend is fixed by it: an exact ``q`` (int, Fraction or
:class:`~qplane.scalars.GaussianRational`) forces exact coefficients, a
float/complex ``q`` forces floating ones.
"""

from __future__ import annotations

from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, NamedTuple

from .scalars import (
    EXACT,
    FLOAT,
    BackendMismatch,
    GaussianRational,
    backend_of,
    format_scalar,
    to_backend,
)


class QMismatch(ValueError):
    """Two elements with different deformation parameters were combined."""


class Monomial(NamedTuple):
    """Anti-Wick basis element ``theta^j thetabar^k``."""

    j: int
    k: int

    def __repr__(self):
        return f"Monomial({self.j}, {self.k})"


def deformation(q):
    """Validate and normalise a deformation parameter.

    Returns a :class:`GaussianRational` for exact input and a ``complex``
    otherwise.  Zero is rejected.
    """
    if isinstance(q, bool):
        raise TypeError("q must be a number")
    if backend_of(q) == FLOAT:
        q = complex(q)
    else:
        q = GaussianRational.coerce(q)
    if q == 0:
        raise ValueError("q must be nonzero")
    return q


def backend_of_q(q) -> str:
    return FLOAT if isinstance(q, complex) else EXACT


def mul_monomials(a: Monomial, b: Monomial, q):
    """``(theta^a thetabar^b)(theta^c thetabar^d) = q**(-b*c) theta^(a+c) thetabar^(b+d)``."""
    q = deformation(q)
    return q ** (-(a.k * b.j)), Monomial(a.j + b.j, a.k + b.k)


class Element:
    """Immutable, canonical element of the quantum plane.

    ``terms`` maps :class:`Monomial` to nonzero coefficients; the zero
    element has no terms.  Equality compares ``q`` and the term maps.
    """

    __slots__ = ("_terms", "_q", "_hash")

    def __init__(self, terms=None, q=1):
        q = deformation(q)
        backend = backend_of_q(q)
        collected: dict[Monomial, object] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for mono, coeff in items:
            mono = Monomial(*mono)
            if mono.j < 0 or mono.k < 0:
                raise ValueError(f"negative exponent in {mono}")
            c = to_backend(coeff, backend)
            if mono in collected:
                c = collected[mono] + c
            collected[mono] = c
        object.__setattr__(self, "_terms", {m: c for m, c in collected.items() if c != 0})
        object.__setattr__(self, "_q", q)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    # constructors ---------------------------------------------------------

    @classmethod
    def monomial(cls, j: int, k: int, q=1, coeff=1) -> "Element":
        return cls({Monomial(j, k): coeff}, q)

    @classmethod
    def scalar(cls, value, q=1) -> "Element":
        return cls({Monomial(0, 0): value}, q)

    @classmethod
    def zero(cls, q=1) -> "Element":
        return cls({}, q)

    # accessors ------------------------------------------------------------

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    @property
    def q(self):
        return self._q

    @property
    def backend(self) -> str:
        return backend_of_q(self._q)

    def coeff(self, j: int, k: int):
        c = self._terms.get(Monomial(j, k))
        if c is None:
            return 0j if self.backend == FLOAT else GaussianRational(0)
        return c

    def is_zero(self) -> bool:
        return not self._terms

    def sorted_terms(self) -> list:
        return sorted(self._terms.items())

    def in_pre_theta(self) -> bool:
        return all(m.k == 0 for m in self._terms)

    def maxdeg(self) -> int:
        return max((max(m) for m in self._terms), default=0)

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "Element"):
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if self.backend != other.backend:
            raise BackendMismatch("elements use different scalar backends")
        if self._q != other._q:
            raise QMismatch(f"q mismatch: {format_scalar(self._q)} vs {format_scalar(other._q)}")

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            return other
        return Element.scalar(other, self._q)

    def __add__(self, other):
        other = self._coerce(other)
        self._check(other)
        return Element(list(self._terms.items()) + list(other._terms.items()), self._q)

    __radd__ = __add__

    def __neg__(self):
        return Element({m: -c for m, c in self._terms.items()}, self._q)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, alpha) -> "Element":
        alpha = to_backend(alpha, self.backend)
        return Element({m: alpha * c for m, c in self._terms.items()}, self._q)

    def __mul__(self, other):
        if isinstance(other, Element):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        result = Element.scalar(1, self._q)
        for _ in range(n):
            result = mul(result, self)
        return result

    def star(self) -> "Element":
        return star(self)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self._q == other._q and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self._q, frozenset(self._terms.items()))))
        return self._hash

    def __repr__(self):
        return f"Element({format_element(self)!r}, q={format_scalar(self._q)})"

    def __str__(self):
        return format_element(self)


def theta(q=1) -> Element:
    return Element.monomial(1, 0, q)


def thetabar(q=1) -> Element:
    return Element.monomial(0, 1, q)


def mul(f: Element, g: Element) -> Element:
    """Product in normal order, bilinear in the coefficients."""
    f._check(g)
    q = f.q
    acc: dict[Monomial, object] = {}
    for ma, ca in f._terms.items():
        for mb, cb in g._terms.items():
            factor, m = mul_monomials(ma, mb, q)
            c = factor * ca * cb
            acc[m] = acc[m] + c if m in acc else c
    return Element(acc, q)


def star(f: Element) -> Element:
    """Anti-linear involution ``(theta^j thetabar^k)* = theta^k thetabar^j``."""
    return Element({Monomial(m.k, m.j): c.conjugate() for m, c in f._terms.items()}, f.q)


def lincomb(pairs: Iterable) -> Element:
    """Canonical ``sum(alpha * f)`` over ``(alpha, f)`` pairs."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("lincomb needs at least one (scalar, element) pair")
    first = pairs[0][1]
    items = []
    for alpha, f in pairs:
        first._check(f)
        items.extend(f.scale(alpha)._terms.items())
    return Element(items, first.q)


def star_antihom_probe(f: Element, g: Element) -> bool:
    """True iff ``(fg)* == g* f*`` for this pair."""
    if f.backend != EXACT:
        raise BackendMismatch("the anti-homomorphism probe needs exact elements")
    return star(mul(f, g)) == mul(star(g), star(f))


def format_element(f: Element) -> str:
    """Text form in the CLI grammar, terms in increasing (j, k) order."""
    if f.is_zero():
        return "0"
    parts = []
    for (j, k), c in f.sorted_terms():
        factors = []
        if j:
            factors.append("t" if j == 1 else f"t^{j}")
        if k:
            factors.append("tb" if k == 1 else f"tb^{k}")
        body = " ".join(factors)
        negative = False
        if f.backend == EXACT:
            if c.im == 0 or c.re == 0:
                negative = (c.re if c.im == 0 else c.im) < 0
            text = format_scalar(-c if negative else c)
        else:
            if c.imag == 0 or c.real == 0:
                negative = (c.real if c.imag == 0 else c.imag) < 0
            text = _float_coeff(-c if negative else c)
        if body and text == "1":
            term = body
        else:
            term = f"{text} {body}".strip()
        parts.append(("-" if negative else "+", term))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out


def _float_coeff(c: complex) -> str:
    if c.imag == 0:
        return repr(c.real)
    if c.real == 0:
        return f"{c.imag!r}i"
    return f"({c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}i)"


def as_fraction(x) -> Fraction:
    """Real part of an exact real scalar as a Fraction; raises if not real."""
    x = GaussianRational.coerce(x)
    if x.im != 0:
        raise ValueError(f"{format_scalar(x)} is not real")
    return x.re
