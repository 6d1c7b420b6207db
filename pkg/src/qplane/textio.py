"""Text grammar and JSON form for quantum-plane elements.

Grammar (whitespace is insignificant)::

    element := ['-'] term (('+' | '-') term)*
    term    := coeff ['*'] [factors] | factors
    factors := factor+
    factor  := 't' ['^' uint] | 'tb' ['^' uint]
    coeff   := rational | [rational] 'i' | '(' ['-'] rational ('+' | '-') [rational] 'i' ')'

Factors are multiplied left to right in the free algebra and reduced to
anti-Wick order with ``thetabar theta = q**-1 theta thetabar``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .qalgebra import Element, Monomial, backend_of_q, deformation, mul
from .scalars import EXACT, GaussianRational, format_fraction, format_scalar, parse_scalar


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<tb>tb)|(?P<t>t)|(?P<i>i)|(?P<op>[\^+\-*()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, q):
        self.text = text
        self.q = q
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, value: str | None = None, kind: str | None = None) -> bool:
        k, v, _ = self.tokens[self.i]
        if kind is not None and k != kind:
            return False
        return value is None or v == value

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str):
        raise ParseError(message, self.tokens[self.i][2], self.text)

    def expect(self, value: str):
        if not self.peek(value):
            self.error(f"expected {value!r}")
        return self.take()

    def rational(self) -> Fraction:
        if not self.peek(kind="num"):
            self.error("expected a rational number")
        _, v, pos = self.take()
        try:
            return Fraction(v)
        except ZeroDivisionError:
            raise ParseError("zero denominator", pos, self.text) from None

    def uint(self) -> int:
        if not self.peek(kind="num") or "/" in self.tokens[self.i][1]:
            self.error("expected a positive integer exponent")
        n = int(self.take()[1])
        if n < 1:
            self.error("exponent must be positive")
        return n

    def parse(self) -> list:
        terms = []
        sign = 1
        if self.peek("-"):
            self.take()
            sign = -1
        terms.append((sign, self.term()))
        while self.peek("+") or self.peek("-"):
            sign = 1 if self.take()[1] == "+" else -1
            terms.append((sign, self.term()))
        if not self.peek(kind="end"):
            self.error("unexpected token")
        return terms

    def coeff(self) -> GaussianRational | None:
        if self.peek(kind="num"):
            r = self.rational()
            if self.peek(kind="i"):
                self.take()
                return GaussianRational(0, r)
            return GaussianRational(r)
        if self.peek(kind="i"):
            self.take()
            return GaussianRational(0, 1)
        if self.peek("("):
            self.take()
            neg = False
            if self.peek("-"):
                self.take()
                neg = True
            re_part = self.rational()
            if neg:
                re_part = -re_part
            if not (self.peek("+") or self.peek("-")):
                self.error("expected '+' or '-' inside complex coefficient")
            s = -1 if self.take()[1] == "-" else 1
            im_part = self.rational() if self.peek(kind="num") else Fraction(1)
            self.expect("i")
            self.expect(")")
            return GaussianRational(re_part, s * im_part)
        return None

    def factors(self) -> list[Monomial]:
        out = []
        while self.peek(kind="t") or self.peek(kind="tb"):
            kind = self.take()[0]
            n = 1
            if self.peek("^"):
                self.take()
                n = self.uint()
            out.append(Monomial(n, 0) if kind == "t" else Monomial(0, n))
        return out

    def term(self):
        c = self.coeff()
        if c is not None and self.peek("*"):
            self.take()
            fs = self.factors()
            if not fs:
                self.error("expected a factor after '*'")
        else:
            fs = self.factors()
        if c is None and not fs:
            self.error("expected a coefficient or a factor")
        return (c if c is not None else GaussianRational(1), fs)


def parse_element(text: str, q=1) -> Element:
    """Parse the text grammar into a canonical element over deformation ``q``.

    Coefficients are exact rationals; with a floating ``q`` they are
    converted to floats.
    """
    q = deformation(q)
    exact = backend_of_q(q) == EXACT
    total = Element.zero(q)
    for sign, (c, fs) in _Parser(text, q).parse():
        c = c * sign
        coeff = c if exact else complex(c)
        word = Element.scalar(coeff, q)
        for mono in fs:
            word = mul(word, Element({mono: 1}, q))
        total = total + word
    return total


def _fmt_part(x, exact: bool) -> str:
    return format_fraction(x) if exact else repr(float(x))


def _fmt_q(q) -> str:
    if isinstance(q, GaussianRational):
        return format_scalar(q)
    return repr(q.real) if q.imag == 0 else repr(q)


def element_to_json(f: Element) -> dict:
    exact = f.backend == EXACT
    return {
        "q": _fmt_q(f.q),
        "terms": [
            {"j": m.j, "k": m.k, "re": _fmt_part(c.real, exact), "im": _fmt_part(c.imag, exact)}
            for m, c in f.sorted_terms()
        ],
    }


def element_from_json(obj: dict) -> Element:
    q = deformation(parse_scalar(str(obj["q"])))
    exact = backend_of_q(q) == EXACT
    terms = []
    for t in obj["terms"]:
        if exact:
            c = GaussianRational(Fraction(t["re"]), Fraction(t["im"]))
        else:
            c = complex(float(t["re"]), float(t["im"]))
        terms.append(((int(t["j"]), int(t["k"])), c))
    return Element(terms, q)
