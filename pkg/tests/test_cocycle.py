"""Coboundaries, the membership solver, and pullback bookkeeping."""

import pytest

from wittlab.ahdeform import fp_vec, psi_build
from wittlab.cohomlab.cocycle import Cocycle2, b2_membership, coboundary, pullback_psi
from wittlab.errors import ScenarioInvalid
from wittlab.rings import ring_make
from wittlab.series import TruncSeries, from_literal
from wittlab.witt import WittVec, f_lambda, zero_extend


def _gen_series(ctx, cap, text):
    return from_literal(ctx, ("T",), cap, text)


def test_trivial_coboundary():
    z4 = ring_make("zmod:4")
    c = coboundary(TruncSeries.one(z4, ("T",), 6), z4.one)
    assert c.series == TruncSeries.one(z4, ("X", "Y"), 6)
    res = b2_membership(c)
    assert res.certified
    assert res.certificate.boundary().series == c.series


def test_coboundary_lambda_zero_example():
    # F = 1 + T, lam = 0: (1+X)(1+Y)/(1+X+Y)
    z8 = ring_make("zmod:8")
    cap = 5
    c = coboundary(_gen_series(z8, cap, "1+T"), z8.zero)
    lhs = from_literal(z8, ("X", "Y"), cap, "(1+X)*(1+Y)")
    den = from_literal(z8, ("X", "Y"), cap, "1+X+Y")
    from wittlab.series import s_inv

    assert c.series == lhs * s_inv(den)
    assert c.cocycle_condition()


def test_membership_roundtrip():
    z4 = ring_make("zmod:4")
    cap = 6
    for text in ("1+T^2", "1+T+2*T^3", "3+3*T"):
        c = coboundary(_gen_series(z4, cap, text), z4.one)
        res = b2_membership(c)
        assert res.certified
        assert res.certificate.verify(c)


def test_membership_refuted_f2():
    # over F_2 with lam = 1, F_p(v, 1; X, Y) is a coboundary only for v = 0
    f2 = ring_make("zmod:2")
    cap = 6
    v = WittVec(2, f2, [1, 0, 0])
    c = Cocycle2(fp_vec(v, f2.one, cap), f2.one)
    assert c.cocycle_condition()
    res = b2_membership(c)
    assert res.status == "refuted"
    zero_c = Cocycle2(fp_vec(WittVec(2, f2, [0, 0, 0]), f2.one, cap), f2.one)
    assert b2_membership(zero_c).certified


def test_cocycle_invariant_guards():
    z4 = ring_make("zmod:4")
    bad = from_literal(z4, ("X", "Y"), 4, "1 + X")
    with pytest.raises(ScenarioInvalid):
        Cocycle2(bad, z4.one)
    asym = from_literal(z4, ("X", "Y"), 4, "1 + X*Y^2")
    with pytest.raises(ScenarioInvalid):
        Cocycle2(asym, z4.one)


def test_pullback_psi():
    f2 = ring_make("zmod:2")
    cap = 8
    psi = psi_build(2, 1, f2.one, [f2.zero])  # psi = X^2 over F_2
    v = WittVec(2, f2, [1, 1, 0])
    c = Cocycle2(fp_vec(v, f2.one, cap), f2.one)
    pulled = pullback_psi(c, psi)
    assert pulled.lam == f2.one
    # substitution doubles degrees
    assert all((i + j) % 2 == 0 for (i, j) in pulled.series.coeffs)
    assert pulled.series.coefficient((2, 2)) == c.series.coefficient((1, 1))
    # pullback of a coboundary is the coboundary of the composed generator
    gen = _gen_series(f2, cap, "1+T+T^3")
    db = coboundary(gen, psi.lam_power())
    pulled_db = pullback_psi(db, psi)
    from wittlab.series import s_subst

    composed = s_subst(gen, {"T": psi.series(("T",), cap, var="T")})
    assert pulled_db.series == coboundary(composed, f2.one).series
    # distinct cocycles stay distinct under pullback (injective bookkeeping)
    v2 = WittVec(2, f2, [0, 1, 0])
    c2 = Cocycle2(fp_vec(v2, f2.one, cap), f2.one)
    assert c.series != c2.series
    assert pullback_psi(c, psi).series != pullback_psi(c2, psi).series


def test_membership_over_z4_with_zero_divisor_branching():
    z4 = ring_make("zmod:4")
    cap = 6
    psi_lam = z4.from_int(2)
    gen = _gen_series(z4, cap, "1+2*T+T^2+3*T^4")
    c = coboundary(gen, psi_lam)
    res = b2_membership(c)
    assert res.certified
    assert res.certificate.verify(c)
