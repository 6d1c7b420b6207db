from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qplane.qalgebra import (
    Element,
    Monomial,
    QMismatch,
    deformation,
    lincomb,
    mul,
    mul_monomials,
    star,
    star_antihom_probe,
    theta,
    thetabar,
)
from qplane.scalars import BackendMismatch, GaussianRational as GR

from . import oracles
from .strategies import deformations, elements, gaussian, monomial


def test_defining_relation():
    q = GR(2)
    t, tb = theta(q), thetabar(q)
    assert mul(t, tb) == mul(tb, t) * q
    assert mul(tb, t) == Element.monomial(1, 1, q, Fraction(1, 2))


def test_mul_monomials_rule():
    c, m = mul_monomials(Monomial(1, 2), Monomial(3, 0), GR(2))
    assert m == Monomial(4, 2) and c == GR(Fraction(1, 64))


@given(monomial, monomial, deformations)
def test_products_match_rewriting_oracle(a, b, q):
    got = mul(Element.monomial(*a, q), Element.monomial(*b, q))
    assert dict(got.terms) == oracles.product(tuple(a), tuple(b), q)


@given(deformations.flatmap(lambda q: st.tuples(elements(q), elements(q), elements(q))))
def test_associative_and_distributive(fgh):
    f, g, h = fgh
    assert mul(mul(f, g), h) == mul(f, mul(g, h))
    assert mul(f, g + h) == mul(f, g) + mul(f, h)


@given(deformations.flatmap(lambda q: st.tuples(elements(q), gaussian, elements(q))))
def test_star_involutive_antilinear(data):
    f, c, g = data
    assert star(star(f)) == f
    assert star(f * c + g) == star(f) * c.conjugate() + star(g)


def test_star_on_monomials():
    assert star(Element.monomial(2, 1, 1, GR(3, 2))) == Element.monomial(1, 2, 1, GR(3, -2))


@given(st.sampled_from([GR(2), GR(Fraction(1, 3)), GR(-1)]).flatmap(
    lambda q: st.tuples(elements(q), elements(q))))
def test_star_antihomomorphic_for_real_q(fg):
    assert star_antihom_probe(*fg)


def test_star_antihom_fails_for_unimodular_nonreal_q():
    q = GR(0, 1)
    assert star_antihom_probe(theta(q), thetabar(q))
    assert not star_antihom_probe(thetabar(q), theta(q))


def test_canonical_form_drops_zeros():
    f = Element({(1, 0): 1, (0, 1): 0})
    assert f == theta()
    assert (f - f).is_zero()
    assert hash(Element({(1, 0): GR(1)})) == hash(theta())


def test_lincomb_and_power():
    q = GR(Fraction(1, 2))
    f = lincomb([(2, theta(q)), (GR(0, 1), thetabar(q))])
    assert f.coeff(1, 0) == 2 and f.coeff(0, 1) == GR(0, 1)
    assert theta(q) ** 3 == Element.monomial(3, 0, q)
    assert (theta(q) + thetabar(q)) ** 0 == Element.scalar(1, q)


def test_errors():
    with pytest.raises(ValueError):
        deformation(0)
    with pytest.raises(QMismatch):
        theta(2) + theta(3)
    with pytest.raises(BackendMismatch):
        Element({(0, 0): Fraction(1, 2)}, 0.5)
    with pytest.raises(BackendMismatch):
        theta(1) + theta(1.0)


def test_float_backend_matches_exact():
    fe = mul(Element({(0, 1): 1, (2, 0): GR(0, 1)}, GR(3, 1)), theta(GR(3, 1)))
    ff = mul(Element({(0, 1): 1, (2, 0): 1j}, 3 + 1j), theta(3 + 1j))
    for (j, k), c in fe.terms.items():
        assert abs(complex(c) - ff.coeff(j, k)) < 1e-15


def test_text_form():
    f = mul(theta(1) + thetabar(1), theta(1) - thetabar(1))
    assert str(f) == "-tb^2 + t^2"
