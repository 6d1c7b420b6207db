import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from qplane import toeplitz
from qplane.bargmann import FockVector
from qplane.qalgebra import Element, mul, star
from qplane.scalars import GaussianRational as GR
from qplane.textio import parse_element
from qplane.weights import ccr_weights, constant_weights, factorial_weights, table_weights, w_int

from .strategies import elements

W = factorial_weights()


def test_creation_annihilation_number():
    N = 6
    up = toeplitz.toeplitz_monomial(1, 0, W, N)
    down = toeplitz.toeplitz_monomial(0, 1, W, N)
    assert np.allclose(up.matrix.diagonal(-1), np.sqrt(np.arange(1, N)))
    assert np.allclose(down.matrix.diagonal(1), np.sqrt(np.arange(1, N)))
    number = toeplitz.compose(up, down)
    assert [number.coords[a, a] for a in range(N)] == list(range(N))
    assert down.diagonal(-1) == [a for a in range(1, N)]


def test_margins():
    T = toeplitz.toeplitz(parse_element("t^2 tb + tb^3"), W, 8)
    assert T.margin == 3 and T.interior == 5
    assert toeplitz.compose(T, T).margin == 6


@given(elements(GR(Fraction(1, 2)), max_terms=3), elements(GR(Fraction(1, 2)), max_terms=3))
def test_linearity_and_anti_wick_composition(f, g):
    w = ccr_weights(Fraction(1, 2))
    N = 10
    lhs = toeplitz.toeplitz(f + g, w, N)
    rhs = toeplitz.toeplitz(f, w, N) + toeplitz.toeplitz(g, w, N)
    assert np.all(lhs.coords == rhs.coords)
    # T_a T_p = T_{p a} when p is a polynomial in theta alone
    p = Element({m: c for m, c in g.terms.items() if m.k == 0}, g.q)
    A, P = toeplitz.toeplitz(f, w, N), toeplitz.toeplitz(p, w, N)
    assert toeplitz.interior_equal(toeplitz.compose(A, P), toeplitz.toeplitz(mul(p, f), w, N))


@given(elements(GR(3, 1), max_terms=3))
def test_adjoint_law_hypothesis(g):
    A = toeplitz.adjoint(toeplitz.toeplitz(g, W, 8))
    B = toeplitz.toeplitz(star(g), W, 8)
    assert np.all(A.coords == B.coords)
    assert np.allclose(A.matrix, toeplitz.toeplitz(g, W, 8).matrix.conj().T)


def test_adjoint_float_backend():
    g = Element({(2, 1): 1 + 2j, (0, 1): 0.5}, 0.5)
    w = constant_weights(0.75)
    A = toeplitz.adjoint(toeplitz.toeplitz(g, w, 7))
    B = toeplitz.toeplitz(star(g), w, 7)
    assert np.allclose(A.matrix, B.matrix, atol=1e-12)


def test_monomial_basis_contract():
    T = toeplitz.toeplitz_monomial(2, 1, W, 8)
    assert T.coords[3, 2] == Fraction(24, 6)
    c, r = T.phi_entry(3, 2)
    assert c ** 2 * r == Fraction(24) ** 2 / (2 * 6)


def test_ccr_residuals():
    assert toeplitz.ccr_residual(Fraction(3, 4), 2, 12) == 0
    assert toeplitz.ccr_residual(Fraction(1, 2), 1, 16, weights=W) == 15
    assert toeplitz.ccr_residual(0.5, 1.0, 50) <= 1e-12
    # at N = 64 the entries reach 2**64, past double precision; only the relative error is small
    assert toeplitz.ccr_residual(0.5, 1.0, 64) / 2.0 ** 64 <= 1e-12
    assert toeplitz.ccr_residual(0.75, 1.0, 64) <= 1e-12
    assert toeplitz.ccr_residual(GR(-2), 1, 10) == 0


def test_q_commutator_recursion():
    q = Fraction(3, 4)
    w = ccr_weights(q)
    up = toeplitz.toeplitz_monomial(1, 0, w, 21)
    down = toeplitz.toeplitz_monomial(0, 1, w, 21)
    C = toeplitz.q_commutator(down, up, GR(1 / q))
    I = toeplitz.identity(w, 21)
    assert toeplitz.interior_equal(C, I)


def test_apply_and_dimension_checks():
    T = toeplitz.toeplitz_monomial(1, 0, W, 4)
    v = FockVector.basis(1, 4, W)
    assert np.allclose(toeplitz.apply(T, v).coeffs, [0, 0, math.sqrt(2), 0])
    with pytest.raises(toeplitz.DimensionMismatch):
        toeplitz.apply(T, FockVector.basis(1, 5, W))
    with pytest.raises(toeplitz.DimensionMismatch):
        toeplitz.compose(T, toeplitz.toeplitz_monomial(1, 0, W, 5))
    with pytest.raises(ValueError):
        toeplitz.toeplitz_monomial(1, 0, W, 0)
    with pytest.raises(TypeError):
        toeplitz.toeplitz(Element.monomial(1, 0), constant_weights(0.5), 4)


@pytest.mark.parametrize("i,j", [(1, 0), (0, 1), (2, 1), (3, 3)])
def test_shift_weights_formula(i, j):
    c = toeplitz.shift_weights(i, j, W, 20)
    for a, val in enumerate(c):
        b = i + a - j
        want = 0.0 if b < 0 else math.factorial(i + a) / math.sqrt(math.factorial(a) * math.factorial(b))
        assert val == pytest.approx(want, rel=1e-12)


def test_norm_and_compactness_verdicts():
    assert toeplitz.norm_bound_monomial(0, 0, W, 32).verdict == toeplitz.BOUNDED_CANDIDATE
    assert toeplitz.compactness_probe(0, 0, W, 32) == toeplitz.NOT_COMPACT_CANDIDATE
    sq = table_weights([math.factorial(a) ** 2 for a in range(70)])
    assert toeplitz.compactness_probe(0, 1, sq, 64) == toeplitz.NOT_COMPACT_CANDIDATE
    assert toeplitz.norm_bound_monomial(0, 1, sq, 64).verdict == toeplitz.DIVERGING
    # geometric weights 2^a make T_theta a shift with c_a -> sqrt(2), T_tb -> 1/sqrt(2)
    geo = table_weights([2 ** a for a in range(80)])
    nb = toeplitz.norm_bound_monomial(1, 0, geo, 64)
    assert nb.sup_estimate == pytest.approx(math.sqrt(2))
    # w_a = 1/a! gives c_a = 1/((a+1) sqrt(a)) for theta tb^2, which tends to 0
    inv = table_weights([Fraction(1, math.factorial(a)) for a in range(70)])
    assert toeplitz.compactness_probe(1, 2, inv, 64, tol=0.01) == toeplitz.COMPACT_CANDIDATE
    assert toeplitz.compactness_probe(1, 2, inv, 64, tol=1e-6) == toeplitz.INCONCLUSIVE


def test_norm_lower_bound_and_csv():
    T = toeplitz.toeplitz(parse_element("t + tb"), W, 6)
    assert toeplitz.norm_lower_bound(T) == pytest.approx(np.linalg.svd(T.matrix, compute_uv=False)[0])
    rows = toeplitz.diagonals_csv(toeplitz.toeplitz_monomial(1, 0, W, 3)).splitlines()
    assert rows[0] == "offset,a,re,im"
    assert rows[1:] == ["1,0,1.0,0.0", f"1,1,{math.sqrt(2)!r},0.0"]


def test_json():
    blob = toeplitz.toeplitz(parse_element("t"), W, 3).to_json()
    assert blob["dim"] == 3 and blob["weights"] == "factorial"
    assert len(blob["entries_row_major"]) == 9
    assert blob["entries_row_major"][3] == [1.0, 0.0]


def test_spec_examples():
    N = 6
    v = toeplitz.apply(toeplitz.toeplitz_monomial(2, 1, W, N), FockVector.basis(1, N, W))
    assert np.allclose(v.coeffs, [0, 0, 6 / math.sqrt(2), 0, 0, 0])
    assert np.allclose(toeplitz.apply(toeplitz.toeplitz_monomial(0, 1, W, N),
                                      FockVector.basis(0, N, W)).coeffs, 0)
    rng = np.random.default_rng(0)
    x = rng.normal(size=N) + 1j * rng.normal(size=N)
    assert np.allclose(toeplitz.apply(toeplitz.identity(W, N), FockVector(x, W)).coeffs, x)
    up = toeplitz.toeplitz_monomial(1, 0, W, N)
    assert np.all(toeplitz.adjoint(up).coords == toeplitz.toeplitz_monomial(0, 1, W, N).coords)
    for i in range(4):
        T = toeplitz.toeplitz_monomial(i, i, W, N)
        assert np.all(toeplitz.adjoint(T).coords == T.coords)
    g = toeplitz.toeplitz(parse_element("(1+i) t^2 tb - 3 tb"), W, N)
    assert np.all(toeplitz.adjoint(toeplitz.adjoint(g)).coords == g.coords)
    assert all(z == 0 for z in toeplitz.q_commutator(g, g, 1).coords.ravel())
    assert all(z == 0 for z in toeplitz.toeplitz(Element.zero(), W, N).coords.ravel())
    T = toeplitz.toeplitz(parse_element("1 + t"), W, 4)
    assert np.allclose(T.matrix, np.eye(4) + np.diag(np.sqrt([1, 2, 3]), -1))


def test_q_commutator_wrong_order_is_nonzero():
    q = Fraction(1, 2)
    w = ccr_weights(q)
    up = toeplitz.toeplitz_monomial(1, 0, w, 8)
    down = toeplitz.toeplitz_monomial(0, 1, w, 8)
    C = toeplitz.q_commutator(up, down, GR(q))
    # diagonal [a]_w - q [a+1]_w
    for a in range(7):
        assert C.coords[a, a] == w_int(w, a) - q * w_int(w, a + 1)
