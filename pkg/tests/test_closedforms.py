"""Closed-form generating functions: frozen values and cross-identities."""

from fractions import Fraction as F

import importlib.resources as ir
import pytest

from verlinde import closedforms as cf
from verlinde.errors import InsufficientOrderError
from verlinde.lattice import SurfaceLattice
from verlinde.qseries import theta3, qproduct
from verlinde.rational import YCoeff


def data_path(name):
    return str(ir.files("verlinde.data").joinpath(name))


def lat(name):
    return SurfaceLattice.from_toml(data_path(name))


def U(k):
    return YCoeff.y_pow(k)


def series_equal(a, b, var, upto):
    return all(a.coeff(**{var: F(k)}) == b.coeff(**{var: F(k)}) for k in range(upto + 1))


# -- Verlinde-type series (rank 2, no refinement) ---------------------------


def test_conj1_k3_is_geometric_square():
    # K3: single SW class 0 with value 1, chi = 2, K = 0, so the series
    # collapses to 1/(1-x^2)^2 = sum (m+1) x^(2m)
    s = cf.conj1_rhs(lat("k3.toml"), (0, 0), (0, 0), 12)
    for m in range(7):
        assert s.coeff(x=F(2 * m)) == YCoeff.from_fraction(m + 1)
    for k in range(1, 13, 2):
        assert s.coeff(x=F(k)) == YCoeff.zero()


def test_conj1_no_sw_classes_gives_zero():
    empty = SurfaceLattice("no-sw", [[0, 1], [1, 0]], [0, 0], 2, [])
    s = cf.conj1_rhs(empty, (0, 0), (0, 0), 8)
    for k in range(9):
        assert s.coeff(x=F(k)) == YCoeff.zero()


def test_conj1_general_type_two_term_bracket():
    # minimal general type: SW = {0: 1, K: (-1)^chi}; the sum collapses to
    # (1+x)^(K(L-K)) + (-1)^(chi + K.c1) (1-x)^(K(L-K))
    gt = lat("general-type-k1-chi2.toml")
    L, c1 = (1,), (1,)
    s = cf.conj1_rhs(gt, L, c1, 10)
    e = gt.dot(gt.K, gt.sub(L, gt.K))
    pref = F(2) ** (2 - gt.chiO + gt.K2())
    plus = cf._binomial_series(10, 1, 1, e)
    minus = cf._binomial_series(10, -1, 1, e)
    sgn = (-1) ** (gt.chiO + gt.dot(gt.K, c1))
    expect = ((plus + minus.scale(sgn)) * cf._binomial_series(
        10, -1, 2, -gt.chi_line(L)
    )).scale(pref)
    assert series_equal(s, expect, "x", 10)


def test_prop1_agrees_on_its_residue_classes():
    gt = lat("general-type-k1-chi2.toml")
    L, c1 = (0,), gt.K
    p = cf.prop1_rhs(gt, L, 16)
    psi = cf.conj1_rhs(gt, L, c1, 16)
    r0 = (-gt.dot(c1, c1) - 3 * gt.chiO) % 4
    for r in range(4):
        agree = all(
            p.coeff(x=F(k)) == psi.coeff(x=F(k)) for k in range(r, 17, 4)
        )
        assert agree == (r % 2 == r0 % 2)


def test_ik_average_extracts_progression():
    gt = lat("general-type-k1-chi2.toml")
    psi = cf.conj1_rhs(gt, (0,), gt.K, 16)
    for s in range(4):
        ik = cf.ik_average(psi, s)
        ex = psi.extract_progression("x", 4, (-s) % 4)
        assert series_equal(ik, ex, "x", 16)


def test_blowup_transform_matches_blown_up_lattice():
    k3 = lat("k3.toml")
    base = cf.conj1_rhs(k3, (0, 0), (0, 0), 14)
    up = k3.blow_up()
    # L-tilde = L - ell E, c1-tilde = c1 - k E; E is the last coordinate
    for ell, k in ((0, 0), (1, 1), (2, 1)):
        got = cf.blowup_transform(base, ell, k)
        direct = cf.conj1_rhs(up, (0, 0, -ell), (0, 0, -k), 14)
        assert series_equal(got, direct, "x", 14)


def test_disconnected_single_curve_matches_sw_table():
    gram, K, chi = [[1]], [1], 2
    for h0 in (0, 1):
        one = SurfaceLattice(
            "m1", gram, K, chi, [((0,), 1), ((1,), (-1) ** h0)]
        )
        got = cf.disconnected_rhs(one, [(1,)], [h0], (0,), (1,), 12)
        expect = cf.conj1_rhs(one, (0,), (1,), 12)
        assert series_equal(got, expect, "x", 12)


# -- refined series ----------------------------------------------------------


def test_conj2_degenerates_to_conj1():
    # y^(1/2) -> 0 after x -> x y^(1/2) recovers the unrefined series
    for name in ("k3.toml", "k3-blowup.toml", "general-type-k1-chi2.toml"):
        L0 = lat(name)
        zero = tuple(0 for _ in L0.K)
        r2 = cf.conj2_rhs(L0, zero, zero, 12)
        half = r2.substitute_monomial("x", YCoeff.y_pow(1), {"x": F(1)})
        dg = half.map_coefficients(lambda c: YCoeff.from_fraction(c.limit_u0()))
        r1 = cf.conj1_rhs(L0, zero, zero, 12)
        assert series_equal(dg, r1, "x", 12)


def test_conj2_y_symmetry_no_insertion():
    for name in ("k3.toml", "general-type-k1-chi2.toml"):
        L0 = lat(name)
        zero = tuple(0 for _ in L0.K)
        s = cf.conj2_rhs(L0, zero, zero, 10)
        assert series_equal(s, s.y_invert(), "x", 10)


def test_conj2_y_symmetry_k3_with_insertion():
    k3 = lat("k3.toml")
    s = cf.conj2_rhs(k3, (1, 1), (0, 0), 10)
    assert series_equal(s, s.y_invert(), "x", 10)


def test_limit_identities():
    assert all(cf.limit_identities_check(16).values())


# -- monopole closed forms ---------------------------------------------------


def test_conj3_matches_thm1_on_k3():
    k3 = lat("k3.toml")
    for vd in (2, 6):
        r3 = cf.conj3_rhs(k3, (0, 0), (0, 0), vd + 2)
        C = cf.c_closed(vd // 4 + 2)
        got = r3.coeff(x=F(vd)) * (-1) ** vd
        expect = cf.thm1_rhs(C, k3, (0, 0), (0, 0), vd)
        assert got == expect


def test_conj3_y_symmetry():
    k3 = lat("k3.toml")
    s = cf.conj3_rhs(k3, (1, 1), (0, 0), 8)
    assert series_equal(s, s.y_invert(), "x", 8)


def test_conj3_odd_c1_vanishes_on_k3():
    # no class a has c1 = K - a mod 2 when c1 is odd and K = 0
    k3 = lat("k3.toml")
    s = cf.conj3_rhs(k3, (0, 0), (1, 0), 8)
    for k in range(9):
        assert s.coeff(x=F(k)) == YCoeff.zero()


def test_thm2_series_identity_low_order():
    c1, c3 = cf.thm2_c1_c3(8)
    cs = cf.c_closed(8)
    assert series_equal(c1, cs[1], "q", 8)
    assert series_equal(c3, cs[3], "q", 8)


def test_twistedchiy_k3_first_coefficient():
    s = cf.twistedchiy_rhs(2, 0, 0, 0, 4)
    assert s.coeff(q=F(0)) == YCoeff.one()
    assert s.coeff(q=F(1)) == YCoeff.from_fraction(20) + (U(2) + U(-2)) * 2


def test_c_closed_normalization_and_k3_diagonal():
    cs = cf.c_closed(4)
    for i in range(1, 7):
        assert cs[i].coeff(q=F(0)) == YCoeff.one()
    # C1's q^2 coefficient carries the K3-diagonal values
    assert cs[1].coeff(q=F(2)) == YCoeff.from_fraction(10) + U(4) + U(-4)
    assert cs[1].coeff(q=F(1)) == YCoeff.zero()


def test_higher_rank_frozen_values():
    for r in (2, 3):
        c1r, c3r, inst = cf.higher_rank_series(r, r + 1)
        assert c3r.coeff(q=F(r)) == (
            (U(2 * r) + U(-2 * r) - 2) * F(r * r, 2)
        )
        assert inst.coeff(q=F(0)) == YCoeff.one()
    _, _, inst = cf.higher_rank_series(2, 2)
    assert inst.coeff(q=F(1)) == YCoeff.from_fraction(20) + (U(2) + U(-2)) * 2


def test_higher_rank_two_is_thm2():
    c1r, c3r, _ = cf.higher_rank_series(2, 6)
    t1, t3 = cf.thm2_c1_c3(6)
    assert series_equal(c1r, t1, "q", 6)
    assert series_equal(c3r, t3, "q", 6)


def test_assemble_monopole_raises_on_short_series():
    k3 = lat("k3.toml")
    C = cf.c_closed(1)
    with pytest.raises(InsufficientOrderError):
        cf.assemble_monopole_prediction(C, k3, (0, 0), (0, 0), 10)


# -- Donaldson specialization ------------------------------------------------


def test_gn_lambda_zero_drops_insertions():
    k3 = lat("k3.toml")
    with_l = cf.gn_rhs(k3, (1, 1), 0, (0, 0), 10)
    no_l = cf.gn_rhs(k3, (0, 0), 1, (0, 0), 10)
    assert series_equal(with_l, no_l, "x", 10)


def test_gn_matches_y1_limit_structure():
    # the lambda-independent prefactor equals the y -> 1 limit of the
    # refined series when no insertions are present
    k3 = lat("k3.toml")
    r2 = cf.conj2_rhs(k3, (0, 0), (0, 0), 10)
    y1 = r2.map_coefficients(lambda c: YCoeff.from_fraction(c.limit_u1()))
    gn = cf.gn_rhs(k3, (0, 0), 1, (0, 0), 10)
    assert series_equal(y1, gn, "x", 10)


def test_jacobi_triple_product():
    th = theta3(20)

    def gen():
        for n in range(1, 11):
            yield (1, 1, 2 * n)
            yield (1, -U(2), 2 * n - 1)
            yield (1, -U(-2), 2 * n - 1)

    prod = qproduct(20, gen(), var="x")
    assert series_equal(th, prod, "x", 20)
