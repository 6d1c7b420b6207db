"""Weight sequences, r-deformed integers and the CCR weight family."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .scalars import GaussianRational, format_fraction, format_scalar, parse_scalar

FACTORIAL = "factorial"
CONSTANT = "constant"
Q_FACTORIAL = "q_factorial"
TABLE = "table"

STRICT = "strict"
REPEAT_LAST = "repeat-last"


class WeightError(ValueError):
    """Base class for weight evaluation failures."""


class PositivityError(WeightError):
    """A weight came out zero, negative or non-real."""


class WeightRangeError(WeightError, IndexError):
    """A strict table was asked for an index it does not store."""


def deformed_int(r, n: int):
    """``[n]_r = 1 + r + ... + r**(n-1)``, with ``[0]_r = 0``.

    Summed term by term so that ``r == 1`` needs no special case.  The result
    has the same type as ``r``.
    """
    if n < 0:
        raise ValueError("deformed integers are defined for n >= 0")
    total = r - r
    power = r ** 0
    for _ in range(n):
        total = total + power
        power = power * r
    return total


def deformed_factorial(r, n: int):
    """``[n]!_r = [n]_r [n-1]_r ... [1]_r`` with ``[0]!_r = 1``."""
    result = r ** 0
    for m in range(1, n + 1):
        result = result * deformed_int(r, m)
    return result


def _positive_real(value, what: str):
    """Return ``value`` as a positive Fraction/float or raise PositivityError."""
    if isinstance(value, GaussianRational):
        if value.im != 0 or value.re <= 0:
            raise PositivityError(f"{what} = {format_scalar(value)} is not a positive real")
        return value.re
    if isinstance(value, complex):
        if value.imag != 0 or value.real <= 0:
            raise PositivityError(f"{what} = {value!r} is not a positive real")
        return value.real
    if isinstance(value, (int, Fraction)):
        if value <= 0:
            raise PositivityError(f"{what} = {value} is not positive")
        return Fraction(value)
    if isinstance(value, float):
        if not value > 0 or math.isinf(value):
            raise PositivityError(f"{what} = {value!r} is not a positive finite real")
        return value
    raise PositivityError(f"{what} = {value!r} is not a real number")


_CCR_CACHE: dict = {}


def _ccr_table(q, w0, n: int) -> tuple[tuple, tuple]:
    """``(w_0..w_n, [0]_r..[n]_r)`` for ``r = 1/q``, extended incrementally and memoised."""
    cached = _CCR_CACHE.get((q, w0))
    if cached is not None and len(cached[0]) > n:
        return cached
    r = 1 / q
    if cached is None:
        weights, dints = [w0], [w0 * 0]
    else:
        weights, dints = list(cached[0]), list(cached[1])
    d = dints[-1]
    for k in range(len(weights), n + 1):
        d = 1 + r * d  # [k]_r from [k-1]_r
        step = _positive_real(d, f"[{k}]_(1/q)")
        dints.append(step)
        weights.append(weights[-1] * step)
    cached = (tuple(weights), tuple(dints))
    _CCR_CACHE[(q, w0)] = cached
    return cached


@dataclass(frozen=True)
class WeightSequence:
    """A rule ``n -> w_n`` with ``w_n > 0`` for ``n >= 0`` and ``w_n = 1`` for ``n < 0``.

    Exact sequences return :class:`~fractions.Fraction` values, floating
    ones return ``float``.  Use the module-level constructors rather than
    building instances directly.
    """

    kind: str
    c: object = None
    q: object = None
    w0: object = None
    values: tuple = ()
    policy: str = STRICT
    source: str | None = None

    def __post_init__(self):
        if self.kind == CONSTANT:
            _positive_real(self.c, "constant weight")
        elif self.kind == Q_FACTORIAL:
            if self.q == 0:
                raise ValueError("q must be nonzero")
            _positive_real(self.w0, "w0")
        elif self.kind == TABLE:
            if not self.values:
                raise WeightError("weight table is empty")
            for n, v in enumerate(self.values):
                _positive_real(v, f"w_{n}")
            if self.policy not in (STRICT, REPEAT_LAST):
                raise WeightError(f"unknown table policy {self.policy!r}")
        elif self.kind != FACTORIAL:
            raise ValueError(f"unknown weight kind {self.kind!r}")

    @property
    def exact(self) -> bool:
        if self.kind == FACTORIAL:
            return True
        if self.kind == CONSTANT:
            return isinstance(self.c, (int, Fraction))
        if self.kind == Q_FACTORIAL:
            return isinstance(self.q, (int, Fraction, GaussianRational)) and isinstance(
                self.w0, (int, Fraction)
            )
        return all(isinstance(v, (int, Fraction)) for v in self.values)

    def __call__(self, n: int):
        one = Fraction(1) if self.exact else 1.0
        if n < 0:
            return one
        if self.kind == FACTORIAL:
            return Fraction(math.factorial(n))
        if self.kind == CONSTANT:
            return Fraction(self.c) if self.exact else float(self.c)
        if self.kind == Q_FACTORIAL:
            q, w0 = self._ccr_args()
            return _ccr_table(q, w0, n)[0][n]
        if n >= len(self.values):
            if self.policy == STRICT:
                raise WeightRangeError(
                    f"w_{n} requested but the table stores only {len(self.values)} weights"
                )
            n = len(self.values) - 1
        v = self.values[n]
        return Fraction(v) if self.exact else float(v)

    def _ccr_args(self):
        if self.exact:
            return GaussianRational.coerce(self.q), Fraction(self.w0)
        return complex(self.q), float(self.w0)

    def ratio(self, n: int, m: int):
        """``w_n / w_m``.

        For the CCR family with ``n >= m >= 0`` this is the product of the
        deformed integers ``[m+1]..[n]``, which avoids dividing two large
        floating products.
        """
        if self.kind == Q_FACTORIAL and n >= m >= 0:
            dints = _ccr_table(*self._ccr_args(), n)[1]
            out = Fraction(1) if self.exact else 1.0
            for k in range(m + 1, n + 1):
                out = out * dints[k]
            return out
        return self(n) / self(m)

    def spec(self) -> str:
        """The weight-spec string this sequence was (or could have been) parsed from."""
        if self.kind == FACTORIAL:
            return "factorial"
        if self.kind == CONSTANT:
            return f"constant:{_fmt_real(self.c)}"
        if self.kind == Q_FACTORIAL:
            return f"qfactorial:q={format_scalar(self.q)}:w0={_fmt_real(self.w0)}"
        if self.source is not None:
            return f"table:{self.source}"
        body = [_fmt_real(v) for v in self.values]
        if self.policy == REPEAT_LAST:
            return "table:" + json.dumps({"values": body, "policy": REPEAT_LAST})
        return "table:" + json.dumps(body)


def _fmt_real(x) -> str:
    if isinstance(x, (int, Fraction)):
        return format_fraction(x)
    return repr(float(x))


def weight(w: WeightSequence, n: int):
    return w(n)


def w_int(w: WeightSequence, n: int):
    """w-deformed integer ``[n]_w = w_n / w_(n-1)``, ``[0]_w = 0``."""
    if n == 0:
        return w(0) * 0
    return w.ratio(n, n - 1)


def factorial_weights() -> WeightSequence:
    return WeightSequence(FACTORIAL)


def constant_weights(c=1) -> WeightSequence:
    return WeightSequence(CONSTANT, c=c)


def table_weights(values, policy: str = STRICT, source: str | None = None) -> WeightSequence:
    return WeightSequence(TABLE, values=tuple(values), policy=policy, source=source)


def ccr_weights(q, w0=1) -> WeightSequence:
    """Weights ``w_k = [k]!_(1/q) * w0`` solving ``[a+1]_w - [a]_w / q = 1``.

    Positivity of each ``[k]_(1/q)`` is only checked when ``w_k`` is
    evaluated; e.g. ``q = -1`` fails at ``k = 2``.
    """
    if isinstance(q, Fraction):
        q = GaussianRational(q)
    return WeightSequence(Q_FACTORIAL, q=q, w0=w0)


def _parse_real(text: str):
    try:
        v = parse_scalar(text)
    except ValueError:
        raise WeightError(f"expected a real number, got {text!r}") from None
    if isinstance(v, GaussianRational):
        if v.im != 0:
            raise WeightError(f"expected a real number, got {text!r}")
        return v.re
    if v.imag != 0:
        raise WeightError(f"expected a real number, got {text!r}")
    return v.real


def _table_from_json(data, source: str | None) -> WeightSequence:
    policy = STRICT
    if isinstance(data, dict):
        policy = data.get("policy", STRICT)
        data = data.get("values")
    if not isinstance(data, list):
        raise WeightError("weight table must be a JSON array of positive rationals")
    values = [_parse_real(str(v)) if not isinstance(v, float) else v for v in data]
    return table_weights(values, policy=policy, source=source)


def parse_weight_spec(text: str) -> WeightSequence:
    """Parse ``factorial``, ``constant:<c>``, ``qfactorial:q=<r>:w0=<r>`` or ``table:<path>``.

    ``table:`` also accepts an inline JSON array/object in place of a path.
    """
    text = text.strip()
    if text == "factorial":
        return factorial_weights()
    kind, _, rest = text.partition(":")
    if kind == "constant" and rest:
        return constant_weights(_parse_real(rest))
    if kind == "qfactorial":
        fields = dict(part.split("=", 1) for part in rest.split(":") if "=" in part)
        if set(fields) != {"q", "w0"}:
            raise WeightError(f"bad qfactorial spec {text!r}; expected qfactorial:q=<r>:w0=<r>")
        return ccr_weights(parse_scalar(fields["q"]), _parse_real(fields["w0"]))
    if kind == "table" and rest:
        if rest.lstrip().startswith(("[", "{")):
            return _table_from_json(json.loads(rest), None)
        return _table_from_json(json.loads(Path(rest).read_text()), rest)
    raise WeightError(f"unrecognised weight spec {text!r}")
