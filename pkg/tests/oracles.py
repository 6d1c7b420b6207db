"""Reference implementations that share no code with the library.

Words in the free algebra are tuples over {'t', 'b'} ('b' is thetabar).
Normal ordering rewrites every adjacent 'b t' to q**-1 't b' until no
such pair is left, which is the defining relation applied literally.
"""

from fractions import Fraction
from math import factorial


def normal_order(word, q):
    """Dict {(j, k): coeff} for ``word`` reduced by repeated adjacent swaps."""
    pending = {tuple(word): 1}
    done = {}
    while pending:
        w, c = pending.popitem()
        for pos in range(len(w) - 1):
            if w[pos] == "b" and w[pos + 1] == "t":
                nw = w[:pos] + ("t", "b") + w[pos + 2:]
                pending[nw] = pending.get(nw, 0) + c / q
                break
        else:
            key = (w.count("t"), w.count("b"))
            done[key] = done.get(key, 0) + c
    return {k: v for k, v in done.items() if v != 0}


def word(j, k):
    return ("t",) * j + ("b",) * k


def product(a, b, q):
    """Product of AW monomials a=(j,k), b=(j',k') through the rewriting oracle."""
    return normal_order(word(*a) + word(*b), q)


def factorial_w(n):
    return Fraction(factorial(max(n, 0)))


def q_factorial_w(q, n):
    """prod_{m=1..n} (1 + q**-1 + ... + q**-(m-1)), written out directly."""
    r = 1 / Fraction(q)
    out = Fraction(1)
    for m in range(1, n + 1):
        out *= sum(r ** e for e in range(m))
    return out


def inner_monomials(a, b, c, d, wfn):
    """<t^a tb^b, t^c tb^d> from the defining table of the pairing."""
    return wfn(a + d) if a + d == b + c else 0


def toeplitz_phi_entry_sq(i, j, a, wfn):
    """Squared phi-basis entry of T_{t^i tb^j} in column a, and its row index."""
    b = i + a - j
    if b < 0:
        return None, 0
    return b, Fraction(wfn(i + a)) ** 2 / (Fraction(wfn(a)) * Fraction(wfn(b)))
