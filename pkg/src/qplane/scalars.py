"""Scalar backends.

Two coefficient fields are supported.  The exact backend is the Gaussian
rationals Q(i), represented by :class:`GaussianRational`; the floating backend
is Python's built-in ``complex``.  Plain ``int`` is accepted by both and is
coerced on entry.  Anything else that would mix the two is rejected with
:class:`BackendMismatch`.
"""

from __future__ import annotations

import numbers
import re
from fractions import Fraction

EXACT = "exact"
FLOAT = "float"


class BackendMismatch(TypeError):
    """Raised when exact and floating scalars meet in one computation."""


class GaussianRational:
    """Complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return cls(value)
        raise BackendMismatch(f"cannot use {value!r} as an exact scalar")

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except BackendMismatch:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except BackendMismatch:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except BackendMismatch:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except BackendMismatch:
            return NotImplemented
        return GaussianRational(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except BackendMismatch:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except BackendMismatch:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = GaussianRational(1)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    @property
    def real(self) -> Fraction:
        return self.re

    @property
    def imag(self) -> Fraction:
        return self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def backend_of(value) -> str | None:
    """Return the backend a scalar belongs to, or None for a neutral int."""
    if isinstance(value, bool):
        raise BackendMismatch("booleans are not scalars")
    if isinstance(value, (GaussianRational, Fraction)):
        return EXACT
    if isinstance(value, numbers.Integral):
        return None
    if isinstance(value, (float, complex)):
        return FLOAT
    if isinstance(value, numbers.Complex):
        return FLOAT
    raise BackendMismatch(f"unsupported scalar type {type(value).__name__}")


def to_backend(value, backend: str):
    """Coerce ``value`` into ``backend``; ints go anywhere, nothing else crosses."""
    b = backend_of(value)
    if b is not None and b != backend:
        raise BackendMismatch(f"{value!r} is a {b} scalar, expected {backend}")
    if backend == EXACT:
        return GaussianRational.coerce(value)
    return complex(value)


def zero(backend: str):
    return ZERO if backend == EXACT else 0j


def one(backend: str):
    return ONE if backend == EXACT else 1 + 0j


def conj(value):
    return value.conjugate()


def is_zero(value) -> bool:
    return value == 0


def to_float(value) -> complex:
    return complex(value)


# text form ------------------------------------------------------------------


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_scalar(value) -> str:
    """Text form readable back by :func:`parse_scalar`.

    Exact values use the coefficient grammar ("3/4", "-2i", "(1/2-3i)");
    floats use ``repr`` of the real part when the imaginary part is zero.
    """
    if isinstance(value, Fraction):
        value = GaussianRational(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    if isinstance(value, GaussianRational):
        if value.im == 0:
            return _fmt_frac(value.re)
        im = "i" if abs(value.im) == 1 else _fmt_frac(abs(value.im)) + "i"
        if value.re == 0:
            return ("-" if value.im < 0 else "") + im
        sign = "-" if value.im < 0 else "+"
        return f"({_fmt_frac(value.re)}{sign}{im})"
    z = complex(value)
    if z.imag == 0:
        return repr(z.real)
    return repr(z)


def format_fraction(x) -> str:
    """Rational string for a real exact value (Fraction or real GaussianRational)."""
    if isinstance(x, GaussianRational):
        if x.im != 0:
            raise ValueError(f"{x} is not real")
        x = x.re
    return _fmt_frac(Fraction(x))


_RAT = r"[+-]?\d+(?:/\d+)?"
_EXACT_RE = re.compile(
    rf"^\s*(?:(?P<r>{_RAT})|(?P<i>[+-]?(?:\d+(?:/\d+)?)?)\s*i|(?P<open>\()?\s*(?P<cr>{_RAT})\s*(?P<s>[+-])\s*(?P<ci>\d+(?:/\d+)?)?\s*i\s*(?(open)\)))\s*$"
)


def parse_scalar(text: str):
    """Parse a scalar string.

    Rational forms ("3/4", "-2", "i", "5/2i", "3+i", "(3+i)") give a
    :class:`GaussianRational`; anything Python's ``complex`` accepts
    ("0.75", "(1+2j)") gives a float-backend ``complex``.
    """
    m = _EXACT_RE.match(text)
    if m:
        if m.group("r") is not None:
            return GaussianRational(Fraction(m.group("r")))
        if m.group("cr") is not None:
            im = Fraction(m.group("ci")) if m.group("ci") else Fraction(1)
            if m.group("s") == "-":
                im = -im
            return GaussianRational(Fraction(m.group("cr")), im)
        im = m.group("i")
        if im in ("", "+", "-"):
            return GaussianRational(0, -1 if im == "-" else 1)
        return GaussianRational(0, Fraction(im))
    try:
        return complex(text.strip().replace("i", "j"))
    except ValueError:
        raise ValueError(f"not a scalar: {text!r}") from None
