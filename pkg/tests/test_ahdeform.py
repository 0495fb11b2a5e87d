"""psi, the deformed exponential, the cocycle series, and G."""

import pytest

from wittlab.ahdeform import (
    DeformLaw,
    PsiPoly,
    ep_universal,
    ep_vec,
    ep_vec_exponent_form,
    fp_universal,
    fp_vec,
    gp,
    psi_build,
    psi_hom_check,
    ptilde,
)
from wittlab.errors import RelationViolated, UnsupportedE
from wittlab.rings import PLocalRing, Q, SymbolicLaurentRing, ring_make
from wittlab.rings.qpoly import QPoly
from wittlab.series import TruncSeries, s_exp, s_subst, specialize_series
from wittlab.witt import WittVec, f_lambda, make_a, t_map, teichmuller, zero_extend

QP2 = PLocalRing(2)


def _universal_ring(p, l, extra=()):
    """Q[extra..., L, nu_0..nu_{l-1}] with nu_k bound to p^{l-k} L^{p^k - p^l}."""
    gens = tuple(extra) + ("L",) + tuple(f"nu{k}" for k in range(l))
    subs = {}
    n = len(gens)
    lidx = len(extra)
    for k in range(l):
        subs[f"nu{k}"] = QPoly.monomial(n, tuple(p ** k - p ** l if i == lidx else 0 for i in range(n)), p ** (l - k))
    return SymbolicLaurentRing(p, gens, ("L",), subs)


def _universal_psi(p, l, ring):
    lam = ring.gen("L")
    nu = [ring.gen(f"nu{k}") for k in range(l)]
    return psi_build(p, l, lam, nu)


def test_psi_build_symbolic_p2_l1():
    ring = _universal_ring(2, 1)
    psi = _universal_psi(2, 1, ring)
    # psi(X) = nu_0 X + X^2 with nu_0 = 2/L
    assert psi.alphas == [ring.gen("nu0")]
    assert psi.alphas[0] == ring.exact_div(ring.from_int(2), ring.gen("L"))


def test_psi_build_symbolic_p2_l2():
    ring = _universal_ring(2, 2)
    psi = _universal_psi(2, 2, ring)
    nu0, nu1, lam = ring.gen("nu0"), ring.gen("nu1"), ring.gen("L")
    assert psi.alphas == [nu0, nu1 * 3, lam * nu1 * 2]


def test_psi_build_concrete_z4():
    z4 = ring_make("zmod:4")
    psi = psi_build(2, 2, z4.one, [z4.zero, z4.from_int(2)])
    assert psi.alphas == [z4.zero, z4.from_int(2), z4.zero]  # 2X^2 + X^4
    bad = [z4.one, z4.from_int(2)]
    with pytest.raises(RelationViolated) as err:
        psi_build(2, 2, z4.one, bad)
    assert err.value.k == 0


def test_psi_hom_check():
    # lam = 0 over F_p: Frobenius additivity
    for spec, p, l in (("zmod:2", 2, 1), ("zmod:3", 3, 1), ("zmod:2", 2, 2)):
        ctx = ring_make(spec)
        psi = psi_build(p, l, ctx.zero, [ctx.zero] * l)
        ok, witness = psi_hom_check(psi, 2 * p ** l)
        assert ok, witness
    # universal laurent, p=2 l=1
    ring = _universal_ring(2, 1)
    ok, witness = psi_hom_check(_universal_psi(2, 1, ring), 8)
    assert ok, witness
    # Z/4 with lam=1, nu=(0,2)
    z4 = ring_make("zmod:4")
    psi = psi_build(2, 2, z4.one, [z4.zero, z4.from_int(2)])
    ok, witness = psi_hom_check(psi, 8)
    assert ok, witness


def test_deform_law():
    z4 = ring_make("zmod:4")
    law = DeformLaw(z4.from_int(2))
    assert law.check_associativity()
    inv = law.inverse_series(6)
    x = TruncSeries.gen(z4, ("X",), 6, "X")
    assert law.compose(x, inv) == TruncSeries.zero(z4, ("X",), 6)


def test_ep_universal_low_coefficients():
    uni = ep_universal(2, 6)
    ring = uni.body.ctx
    assert uni.ok
    assert uni.body.coefficient((0,)) == ring.one
    assert uni.body.coefficient((1,)) == ring.gen("U")
    u, lam = ring.gen("U"), ring.gen("L")
    assert uni.body.coefficient((2,)) == u * (u - lam)


def test_ep_universal_classical_limit():
    # E(1, 0; X) = exp(sum X^{p^r}/p^r) over Q, for p = 2 and 3
    for p, cap in ((2, 12), (3, 9)):
        ctx = PLocalRing(p)
        uni = ep_universal(p, cap)
        spec = specialize_series(uni.body, {"U": ctx.one, "L": ctx.zero}, ctx)
        arg = TruncSeries.zero(ctx, ("X",), cap)
        r = 0
        while p ** r <= cap:
            arg = arg + TruncSeries.gen(ctx, ("X",), cap, "X").stretch(p ** r) * ctx.el(Q(1, p ** r))
            r += 1
        assert spec == s_exp(arg)


def test_ep_vec_examples():
    # v = 0 gives 1
    z4 = ring_make("zmod:4")
    v = WittVec(2, z4, [0, 0])
    assert ep_vec(v, z4.one, 6) == TruncSeries.one(z4, ("X",), 6)
    # Teichmuller telescope: E([mu], mu; X) = 1 + mu X
    ring = SymbolicLaurentRing(2, ("M",), ("M",))
    mu = ring.gen("M")
    e = ep_vec(teichmuller(2, mu, 3), mu, 8)
    assert e == TruncSeries.one(ring, ("X",), 8) + TruncSeries.gen(ring, ("X",), 8, "X") * mu


def test_ep_vec_window_of_classical():
    # v = [1], lam = 0, p = 2, cap 4: window 1 + X + X^2 + (2/3)X^3 + ... of E_2
    ctx = QP2
    v = teichmuller(2, ctx.one, 3)
    e = ep_vec(v, ctx.zero, 4)
    arg = TruncSeries.zero(ctx, ("X",), 4)
    for r in range(3):
        arg = arg + TruncSeries.gen(ctx, ("X",), 4, "X").stretch(2 ** r) * ctx.el(Q(1, 2 ** r))
    assert e == s_exp(arg)


def test_ep_exponent_form_consistency():
    ring = _universal_ring(2, 1, extra=("v0", "v1", "v2"))
    v = WittVec(2, ring, [ring.gen("v0"), ring.gen("v1"), ring.gen("v2")])
    lam = ring.gen("L")
    cap = 8
    assert ep_vec(v, lam, cap) == ep_vec_exponent_form(v, lam, cap)


def test_fp_universal_integral_and_symmetric():
    uni = fp_universal(2, 8)
    assert uni.ok
    body = uni.body
    assert body.coefficient((0, 0)) == body.ctx.one
    for (i, j), c in body.coeffs.items():
        assert body.coefficient((j, i)) == c


def test_fp_vec_trivial_and_lambda_zero():
    z4 = ring_make("zmod:4")
    v = WittVec(2, z4, [0, 0, 0])
    assert fp_vec(v, z4.one, 8) == TruncSeries.one(z4, ("X", "Y"), 8)
    # lam = 0 specialization exists (limit form through the certificate)
    w = WittVec(2, z4, [1, 2, 3])
    f = fp_vec(w, z4.zero, 8)
    assert f.constant_term() == z4.one
    for (i, j), c in f.coeffs.items():
        assert f.coefficient((j, i)) == c


def test_cocycle_identity_universal():
    # F(F^(lam)(v), lam; X, Y) * E(v,lam;X.Y) = E(v,lam;X) E(v,lam;Y), p=2 cap 8
    cap = 8
    ring = _universal_ring(2, 1, extra=("v0", "v1", "v2", "v3"))
    lam = ring.gen("L")
    v = WittVec(2, ring, [ring.gen("v0"), ring.gen("v1"), ring.gen("v2"), ring.gen("v3")])
    law = DeformLaw(lam)
    xy = law.xy(("X", "Y"), cap)
    ex = ep_vec(v, lam, cap, vars_=("X", "Y"), var="X")
    ey = ep_vec(v, lam, cap, vars_=("X", "Y"), var="Y")
    et = ep_vec(v, lam, cap, vars_=("T",), var="T")
    exy = s_subst(et, {"T": xy})
    lhs = fp_vec(f_lambda(lam, v), lam, cap) * exy
    assert lhs == ex * ey


def test_ptilde():
    ring = SymbolicLaurentRing(2, ("M",), ("M",))
    mu = ring.gen("M")
    u = teichmuller(2, mu, 3)
    # k = 0 is ep_vec itself
    assert ptilde(0, u, mu, 8) == ep_vec(u, mu, 8)
    # Teichmuller instance: ptilde^k E = 1 + mu^{p^k} X^{p^k}
    for k in (1, 2):
        e = ptilde(k, u, mu, 8)
        expect = TruncSeries.one(ring, ("X",), 8) + TruncSeries.gen(ring, ("X",), 8, "X").stretch(2 ** k) * mu ** (2 ** k)
        assert e == expect
    # beyond the window: 1
    assert ptilde(4, u, mu, 8) == TruncSeries.one(ring, ("X",), 8)


def test_gp_lemma_instance():
    # G(x, lam^{p^l}; E) = 1 for E = E([lam^{p^l}], lam^{p^l}; psi(X)), p=2 l=1
    cap = 8
    ring = _universal_ring(2, 1, extra=("x0", "x1", "x2"))
    psi = _universal_psi(2, 1, ring)
    mu = psi.lam_power()
    x = WittVec(2, ring, [ring.gen("x0"), ring.gen("x1"), ring.gen("x2")])
    u_inner = teichmuller(2, mu, 4)
    arg = psi.series(("X",), cap)
    e = TruncSeries.one(ring, ("X",), cap) + arg * mu
    assert gp(x, mu, e, mu, u_inner, cap, arg=arg) == TruncSeries.one(ring, ("X",), cap)
    with pytest.raises(UnsupportedE):
        gp(x, mu, e + TruncSeries.gen(ring, ("X",), cap, "X"), mu, u_inner, cap, arg=arg)
