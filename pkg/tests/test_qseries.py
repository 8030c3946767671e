"""Frozen expansions and identities for the q-series building blocks."""

from fractions import Fraction as F

import pytest

from verlinde.errors import GridError
from verlinde.qseries import Dq, G2, G2_bar, eta_bar, qlog, qproduct, theta2, theta3
from verlinde.rational import YCoeff


def U(k):
    return YCoeff.y_pow(k)


def yc(c):
    return YCoeff.from_fraction(F(c))


def test_theta3_low_terms():
    t = theta3(10)
    assert t.coeff(x=0) == YCoeff.one()
    assert t.coeff(x=1) == U(2) + U(-2)
    assert t.coeff(x=4) == U(4) + U(-4)
    assert t.coeff(x=9) == U(6) + U(-6)
    for k in (2, 3, 5, 6, 7, 8, 10):
        assert t.coeff(x=k) == YCoeff.zero()


def test_theta3_u_step():
    # theta3(x, y^(1/2)) carries y^(n/2) = u^n on the x^(n^2) terms
    t = theta3(5, u_step=1)
    assert t.coeff(x=1) == U(1) + U(-1)
    assert t.coeff(x=4) == U(2) + U(-2)


def test_theta3_y_symmetry():
    t = theta3(12)
    assert t == t.y_invert()


def test_theta2_low_terms():
    t = theta2(4)
    assert t.coeff(x=F(1, 4)) == U(1) + U(-1)
    assert t.coeff(x=F(9, 4)) == U(3) + U(-3)
    assert t.coeff(x=1) == YCoeff.zero()
    assert t == t.y_invert()


def test_theta2_x_scale_integral_grid():
    # theta2(x^4, y) lives on the integer grid: exponents 4 n^2 with n half-integral
    t = theta2(12, denom=1, x_scale=4)
    assert t.coeff(x=1) == U(1) + U(-1)
    assert t.coeff(x=9) == U(3) + U(-3)
    assert t.coeff(x=2) == YCoeff.zero()


def test_theta2_off_grid_raises():
    with pytest.raises(GridError):
        theta2(4, denom=1, x_scale=1)


def test_eta_bar_pentagonal():
    e = eta_bar(13)
    expect = {0: 1, 1: -1, 2: -1, 5: 1, 7: 1, 12: -1}
    for k in range(0, 14):
        assert e.coeff(x=k) == yc(expect.get(k, 0))


def test_g2_constants_and_divisor_sums():
    g = G2(5)
    gb = G2_bar(5)
    assert g.coeff(q=0) == yc(F(-1, 24))
    assert gb.coeff(q=0) == YCoeff.zero()
    for d, s in ((1, 1), (2, 3), (3, 4), (4, 7), (5, 6)):
        assert g.coeff(q=d) == yc(s)
        assert gb.coeff(q=d) == yc(s)


def test_dq_scales_by_exponent():
    gb = G2_bar(5)
    d = Dq(gb, "q")
    for k, s in ((1, 1), (2, 6), (3, 12), (4, 28), (5, 30)):
        assert d.coeff(q=k) == yc(s)


def test_qproduct_partition_function():
    # 1 / prod (1 - q^n) generates the partition numbers
    inv_eta = qproduct(10, ((-1, 1, n) for n in range(1, 11)))
    expect = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    for k, p in enumerate(expect):
        assert inv_eta.coeff(q=k) == yc(p)


def test_qproduct_matches_eta_bar():
    direct = eta_bar(12, var="q")
    built = qproduct(12, ((1, 1, n) for n in range(1, 13)))
    for k in range(0, 13):
        assert built.coeff(q=k) == direct.coeff(q=k)


def test_qlog_exp_consistency():
    factors = [(2, 1, 1), (-3, U(2), 2), (F(1, 2), U(-2), 3)]
    lg = qlog(8, iter(factors))
    pr = qproduct(8, iter(factors))
    assert pr == lg.exp()


def test_qproduct_rational_multiplicity_squares():
    # (prod (1-q^n)^(1/2))^2 = prod (1-q^n)
    half = qproduct(8, ((F(1, 2), 1, n) for n in range(1, 9)))
    full = qproduct(8, ((1, 1, n) for n in range(1, 9)))
    sq = (half * half).restrict(full.window)
    assert sq == full


def test_jacobi_triple_product_smoke():
    # theta3 sum form vs product form; the acceptance suite pushes this to x^50
    order = 20
    t = theta3(order)

    def gen():
        for n in range(1, order + 1):
            yield (1, 1, 2 * n)
            if 2 * n - 1 <= order:
                yield (1, -U(2), 2 * n - 1)
                yield (1, -U(-2), 2 * n - 1)

    prod = qproduct(order, gen(), var="x")
    assert t == prod.restrict(t.window)
