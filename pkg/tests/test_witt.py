"""Witt vectors against the ghost-component oracle."""

import pytest

from wittlab.errors import LengthTooShort, NoSuchA, ScenarioInvalid
from wittlab.rings import IntegerRing, SamplePolicy, SymbolicLaurentRing, ring_make
from wittlab.rings.qpoly import QPoly
from wittlab.witt import (
    WittVec,
    comp_power,
    f_lambda,
    frobenius,
    get_table,
    ghost,
    make_a,
    scalar_int,
    t_map,
    teich_scale,
    teichmuller,
    truncate,
    verschiebung,
    witt_add,
    witt_mul,
    witt_neg,
    zero,
    zero_extend,
)
from wittlab.witt.optables import clear_registry, derive_op_polys, load_table, save_table

Z = IntegerRing()


def _zvec(p, values):
    return WittVec(p, Z, [Z.from_int(v) for v in values])


def _sym_ring(p, names):
    return SymbolicLaurentRing(p, tuple(names))


def _generic_vec(ring, p, names):
    return WittVec(p, ring, [ring.gen(n) for n in names])


def test_ghost_examples():
    assert [c.payload for c in ghost(_zvec(2, [1, 1]))] == [1, 3]
    assert [c.payload for c in ghost(_zvec(3, [1, 0, 0]))] == [1, 1, 1]
    assert [c.payload for c in ghost(_zvec(2, [2, 1]))] == [2, 6]


def test_sum_poly_examples():
    t = derive_op_polys(2, 2, "sum")
    # s_1 = x1 + y1 - x0*y0
    s1 = t.polys[1]
    assert s1 == QPoly(4, {(0, 1, 0, 0): _q(1), (0, 0, 0, 1): _q(1), (1, 0, 1, 0): _q(-1)})
    t3 = derive_op_polys(3, 2, "sum")
    s1 = t3.polys[1]
    assert s1 == QPoly(
        4,
        {(0, 1, 0, 0): _q(1), (0, 0, 0, 1): _q(1), (2, 0, 1, 0): _q(-1), (1, 0, 2, 0): _q(-1)},
    )


def _q(n):
    from wittlab.rings.rat import Q

    return Q(n)


def test_frobenius_poly_example():
    t = derive_op_polys(2, 2, "frobenius")
    assert t.polys[0] == QPoly(2, {(2, 0): _q(1), (0, 1): _q(2)})


def test_ghost_oracle_on_ring_ops_over_Z():
    policy = SamplePolicy(int_bound=20)
    for p, m in ((2, 3), (3, 2)):
        for i in range(15):
            x = WittVec(p, Z, [Z.sample(7 * i + j, policy) for j in range(m)])
            y = WittVec(p, Z, [Z.sample(1000 + 7 * i + j, policy) for j in range(m)])
            gx, gy = ghost(x), ghost(y)
            assert ghost(witt_add(x, y)) == tuple(a + b for a, b in zip(gx, gy))
            assert ghost(witt_mul(x, y)) == tuple(a * b for a, b in zip(gx, gy))
            assert ghost(witt_neg(x)) == tuple(-a for a in gx)


def test_witt_identities_f2():
    f2 = ring_make("zmod:2")
    x = WittVec(2, f2, [1, 0])
    assert witt_add(x, x) == WittVec(2, f2, [0, 1])
    for idx in range(4):
        w = WittVec(2, f2, [f2.element_at(idx % 2), f2.element_at(idx // 2)])
        assert witt_add(w, zero(2, f2, 2)) == w
        assert witt_mul(teichmuller(2, f2.one, 2), w) == w


def test_frobenius_phantom_law_symbolic():
    ring = _sym_ring(2, ["x0", "x1", "x2", "x3"])
    w = _generic_vec(ring, 2, ["x0", "x1", "x2", "x3"])
    g = ghost(w)
    gf = ghost(frobenius(w))
    for i in range(len(w) - 1):
        assert gf[i] == g[i + 1]


def test_frobenius_is_power_map_mod_p():
    for spec, p in (("zmod:2", 2), ("zmod:3", 3)):
        ctx = ring_make(spec)
        for idx in range(ctx.size() ** 3):
            comps = [ctx.element_at((idx // ctx.size() ** j) % ctx.size()) for j in range(3)]
            w = WittVec(p, ctx, comps)
            fw = frobenius(w)
            assert fw == WittVec(p, ctx, [c ** p for c in comps[:2]])
    f2 = ring_make("zmod:2")
    assert frobenius(zero(2, f2, 3)) == zero(2, f2, 2)


def test_verschiebung():
    w = _zvec(2, [1])
    v = verschiebung(w)
    assert v == _zvec(2, [0, 1])
    assert [c.payload for c in ghost(v)] == [0, 2]
    policy = SamplePolicy(int_bound=9)
    for p in (2, 3):
        for i in range(10):
            w = WittVec(p, Z, [Z.sample(31 * i + j, policy) for j in range(3)])
            # F(V(w)) = p.w at length 3
            assert frobenius(verschiebung(w)) == scalar_int(p, w)
    assert verschiebung(zero(2, Z, 2)) == zero(2, Z, 3)


def test_teichmuller():
    assert teichmuller(2, Z.zero, 3) == zero(2, Z, 3)
    lam = Z.from_int(5)
    assert [c.payload for c in ghost(teichmuller(3, lam, 3))] == [5, 5 ** 3, 5 ** 9]
    z9 = ring_make("zmod:9")
    for i in range(9):
        for j in range(9):
            a, b = z9.element_at(i), z9.element_at(j)
            assert witt_mul(teichmuller(3, a, 2), teichmuller(3, b, 2)) == teichmuller(3, a * b, 2)


def test_teich_scale_matches_witt_mul():
    z8 = ring_make("zmod:8")
    for i in range(12):
        a = z8.element_at(3 * i)
        w = WittVec(2, z8, [z8.element_at(i), z8.element_at(i + 1), z8.element_at(5 * i + 3)])
        assert teich_scale(a, w) == witt_mul(teichmuller(2, a, 3), w)
    ring = _sym_ring(2, ["a", "w0", "w1"])
    w = WittVec(2, ring, [ring.gen("w0"), ring.gen("w1")])
    scaled = teich_scale(ring.gen("a"), w)
    assert scaled.comps[1] == ring.gen("a") ** 2 * ring.gen("w1")


def test_f_lambda():
    # lam = 0 reduces to frobenius
    policy = SamplePolicy(int_bound=9)
    for i in range(8):
        w = WittVec(2, Z, [Z.sample(11 * i + j, policy) for j in range(3)])
        assert f_lambda(Z.zero, w) == frobenius(w)
    # over F_2 with lam = 1, F^(1) kills everything
    f2 = ring_make("zmod:2")
    for idx in range(8):
        comps = [f2.element_at(idx & 1), f2.element_at((idx >> 1) & 1), f2.element_at((idx >> 2) & 1)]
        w = WittVec(2, f2, comps)
        assert f_lambda(f2.one, w) == zero(2, f2, 2)
    # symbolic Teichmuller: F^(lam)([x]) = [x^p] - [lam^{p-1} x]
    from wittlab.witt import witt_sub

    ring = _sym_ring(3, ["lam", "x"])
    lam, x = ring.gen("lam"), ring.gen("x")
    lhs = f_lambda(lam, teichmuller(3, x, 3))
    rhs = witt_sub(teichmuller(3, x ** 3, 2), teichmuller(3, lam ** 2 * x, 2))
    assert lhs == rhs
    with pytest.raises(LengthTooShort):
        f_lambda(Z.zero, _zvec(2, [1]))


def test_t_map():
    # a = [1] acts as the identity
    z4 = ring_make("zmod:4")
    a = teichmuller(2, z4.one, 3)
    for i in range(10):
        w = WittVec(2, z4, [z4.element_at(i), z4.element_at(2 * i + 1), z4.element_at(3 * i)])
        assert t_map(a, w) == w
    # first component law and Teichmuller image, symbolically
    ring = _sym_ring(2, ["a0", "a1", "a2", "x0", "x1", "x2", "mu"])
    a = WittVec(2, ring, [ring.gen("a0"), ring.gen("a1"), ring.gen("a2")])
    x = WittVec(2, ring, [ring.gen("x0"), ring.gen("x1"), ring.gen("x2")])
    tx = t_map(a, x)
    assert tx.comps[0] == ring.gen("a0") * ring.gen("x0")
    mu = ring.gen("mu")
    timage = t_map(a, teichmuller(2, mu, 3))
    assert timage == WittVec(2, ring, [ring.gen("a0") * mu, ring.gen("a1") * mu, ring.gen("a2") * mu])
    # phantom law on generic symbols
    g_tx, g_x = ghost(tx), ghost(x)
    p = 2
    for n in range(3):
        rhs = ring.zero
        for i in range(n + 1):
            rhs = rhs + (p ** i) * (a.comps[i] ** (p ** (n - i))) * g_x[n - i]
        assert g_tx[n] == rhs


def test_t_map_and_f_lambda_additive():
    z8 = ring_make("zmod:8")
    a = WittVec(2, z8, [3, 5, 1])
    lam = z8.from_int(3)
    for i in range(10):
        x = WittVec(2, z8, [z8.element_at(i), z8.element_at(i + 3), z8.element_at(7 * i)])
        y = WittVec(2, z8, [z8.element_at(5 * i + 2), z8.element_at(i + 1), z8.element_at(2 * i)])
        assert t_map(a, witt_add(x, y)) == witt_add(t_map(a, x), t_map(a, y))
        assert f_lambda(lam, witt_add(x, y)) == witt_add(f_lambda(lam, x), f_lambda(lam, y))


def test_comp_power():
    z9 = ring_make("zmod:9")
    w = WittVec(3, z9, [2, 5, 7])
    assert comp_power(w, 0) == w
    lam = z9.from_int(2)
    assert comp_power(teichmuller(3, lam, 2), 1) == teichmuller(3, lam ** 3, 2)
    f2 = ring_make("zmod:2")
    for idx in range(8):
        comps = [f2.element_at(idx & 1), f2.element_at((idx >> 1) & 1), f2.element_at((idx >> 2) & 1)]
        w = WittVec(2, f2, comps)
        assert truncate(comp_power(w, 1), 2) == frobenius(w)


def test_make_a_symbolic():
    ring = SymbolicLaurentRing(2, ("L",), ("L",))
    lam = ring.gen("L")
    a = make_a(2, lam, 1, 3)
    two_inv_l = ring.exact_div(ring.from_int(2), lam)
    assert a.comps[0] == two_inv_l


def test_make_a_f2():
    f2 = ring_make("zmod:2")
    a = make_a(2, f2.one, 1, 3)
    b = scalar_int(2, teichmuller(2, f2.one, 3))
    assert a == b  # lam^{p^l} = 1, so a equals 2[1] itself
    assert a.comps[0].is_zero()


def test_make_a_zero_lambda():
    f2 = ring_make("zmod:2")
    a = make_a(2, f2.zero, 1, 2)
    assert a.is_zero()


def test_make_a_nu0_pin():
    z4 = ring_make("zmod:4")
    # lam = 2, l = 1: lam^2 = 0 in Z/4 and p^l[lam] = 0, so a_0 is pinned to nu_0 = 1
    a = make_a(2, z4.from_int(2), 1, 2, nu0=z4.one)
    assert a.comps[0] == z4.one
    with pytest.raises(ScenarioInvalid):
        make_a(2, z4.one, 1, 2, nu0=z4.from_int(3))


def test_table_cache_roundtrip(tmp_path):
    t = derive_op_polys(2, 3, "sum")
    t2 = derive_op_polys(2, 3, "sum")
    assert t.body_sha256 == t2.body_sha256
    save_table(t, str(tmp_path))
    loaded = load_table(str(tmp_path), 2, 3, "sum")
    assert loaded == t
    # corruption forces a re-derive (load returns None)
    path = tmp_path / "witt_p2_m3_sum.json"
    path.write_text(path.read_text().replace("x0", "zz", 1))
    assert load_table(str(tmp_path), 2, 3, "sum") is None


def test_zero_extend_truncate():
    w = _zvec(2, [1, 2])
    assert zero_extend(w, 4) == _zvec(2, [1, 2, 0, 0])
    assert truncate(zero_extend(w, 4), 2) == w
