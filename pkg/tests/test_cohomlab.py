"""Scenario-level verifiers: kernels, sequences, pairings, the theorem desk."""

import pytest

from wittlab.cohomlab import (
    build_scenario,
    cyclotomic_scenario,
    diagram_checks,
    exact_seq_check,
    kernel_enum,
    nl_algebra,
    pairing_table,
    run_check,
)
from wittlab.cohomlab.lemmas import (
    check_l4_1,
    check_l4_2,
    check_l4_3,
    check_cocycle_identity,
    check_nl_rank,
    check_remark_1_1,
    check_theorem_1_4,
)
from wittlab.errors import RelationViolated, ScenarioInvalid
from wittlab.rings import Q


F2_L1 = {
    "name": "f2_l1",
    "p": 2,
    "l": 1,
    "m": 2,
    "cap": 8,
    "ring": "zmod:2",
    "lam": "1",
    "nu": ["0"],
    "test_algebras": ["polyquot:zmod:2;T^2"],
}

Z4_L1 = {
    "name": "z4_l1",
    "p": 2,
    "l": 1,
    "m": 2,
    "cap": 8,
    "ring": "zmod:4",
    "lam": "2",
    "nu": ["1"],
}

Z4_L2 = {
    "name": "z4_l2",
    "p": 2,
    "l": 2,
    "m": 2,
    "cap": 8,
    "ring": "zmod:4",
    "lam": "1",
    "nu": ["0", "2"],
}

UNIV_P2_L1 = {"name": "univ_p2_l1", "kind": "universal", "p": 2, "l": 1, "m": 3, "cap": 8}


def test_scenario_validation():
    scn = build_scenario(F2_L1)
    assert scn.a.comps[0].is_zero()  # a = 2[1] has a_0 = 0 = nu_0
    with pytest.raises(RelationViolated):
        build_scenario(dict(Z4_L2, nu=["1", "2"]))
    with pytest.raises(ScenarioInvalid):
        build_scenario(dict(F2_L1, a=["1", "0"]))  # breaks nu_0 = a_0


def test_kernels_f2():
    scn = build_scenario(dict(F2_L1, m=3))
    # F^(1) kills all of W_3(F_2)
    assert len(kernel_enum(scn, "f_lambda")) == 8
    frag = run_check("L4_7", scn)[0]
    assert frag.verdict == "pass"
    assert frag.details["kernel_size"] == 8


def test_kernels_match_on_eps_algebra():
    scn = build_scenario(dict(F2_L1, ring="polyquot:zmod:2;T^2", m=2))
    frag = run_check("L4_7", scn)[0]
    assert frag.verdict == "pass"


def test_exact_sequence_f2():
    scn = build_scenario(F2_L1)
    details = exact_seq_check(scn)
    assert details["ok"]
    assert details["m_l_size"] == 2
    # and over the eps test algebra
    frags = run_check("seq_4_10", scn)
    assert all(f.verdict == "pass" for f in frags)
    assert len(frags) == 2


def test_diagrams_f2():
    scn = build_scenario(F2_L1)
    details = diagram_checks(scn)
    assert details["ok"]


def test_nl_algebra_f2():
    scn = build_scenario(F2_L1)
    frag = check_nl_rank(scn, expect_rank=2, expect_nil=2)
    assert frag.verdict == "pass"


def test_nl_algebra_z4_l2():
    scn = build_scenario(Z4_L2)
    alg = nl_algebra(scn)
    assert alg.rank == 4
    # least nilpotency index of the generator class: X^5 = 2X^3 != 0, X^6 = 0
    assert alg.nilpotency_index_of_x() == 6
    assert alg.check_coassociative_and_counital()


def test_nl_hypothesis_guard():
    scn = build_scenario(Z4_L1)  # nu_0 = 1 is a unit, not divisible by 2
    frag = check_nl_rank(scn)
    assert frag.verdict == "fail"


def test_pairing_f2():
    scn = build_scenario(F2_L1)
    rows, verdicts = pairing_table(scn)
    base = verdicts[scn.ring_spec]
    assert base["classes"] == 2
    assert base["grouplikes"] == 2
    assert base["bijective"]
    values = {r["value"] for r in rows if r["algebra"] == scn.ring_spec}
    assert values == {"1", "1 + X"}


def test_pairing_f2_eps_algebra():
    scn = build_scenario(F2_L1)
    rows, verdicts = pairing_table(scn)
    eps = verdicts["polyquot:zmod:2;T^2"]
    assert eps["bijective"]
    assert eps["classes"] == eps["grouplikes"]


def test_universal_lemmas_cap8():
    scn = build_scenario(UNIV_P2_L1)
    assert check_l4_1(scn).verdict == "pass"
    assert check_l4_2(scn).verdict == "pass"
    assert check_l4_3(scn).verdict == "pass"
    assert check_cocycle_identity(scn).verdict == "pass"


def test_concrete_lemmas_f2():
    scn = build_scenario(F2_L1)
    for check in ("psi_identity", "psi_hom", "L4_1", "L4_2", "L4_3", "cocycle_identity", "L4_5_roundtrip"):
        frags = run_check(check, scn)
        assert all(f.verdict == "pass" for f in frags), (check, [f.witness for f in frags])


def test_concrete_lemmas_z4_l1():
    scn = build_scenario(Z4_L1)
    for check in ("psi_identity", "psi_hom", "L4_2", "L4_3", "cocycle_identity", "L4_5_roundtrip"):
        frags = run_check(check, scn)
        assert all(f.verdict == "pass" for f in frags), (check, [f.witness for f in frags])


def test_theorem_1_4_f2():
    scn = build_scenario(F2_L1)
    frag = check_theorem_1_4(scn)
    assert frag.verdict == "pass", frag.witness
    assert frag.details["vectors"] == 4
    assert frag.details["inconclusive"] == 0
    assert frag.details["nu0_branch"] == "zero"


def test_theorem_1_4_z4_unit_branch():
    scn = build_scenario(Z4_L1)
    frag = check_theorem_1_4(scn)
    assert frag.verdict == "pass", frag.witness
    assert frag.details["vectors"] == 16
    assert frag.details["nu0_branch"] == "unit"
    assert frag.details["inconclusive"] / frag.details["vectors"] < 0.2


def test_cyclotomic_p2_l1():
    scn, details = cyclotomic_scenario(2, 1)
    ctx = scn.ctx
    assert scn.lam == ctx.from_int(2)
    assert details["u"][1] == ctx.one
    assert details["u_units"] == [True]
    assert details["nu"][0] == ctx.one
    assert details["nu_top_unit"]


def test_cyclotomic_p3_l1():
    scn, details = cyclotomic_scenario(3, 1)
    ctx = scn.ctx
    zeta = ctx.gen()
    assert scn.lam == ctx.one - zeta
    assert details["u"][1] == ctx.one + zeta
    assert details["u_units"] == [True]
    # 3 = u_1 lam^2 and nu_0 = u_1 is a unit
    assert ctx.from_int(3) == details["u"][1] * scn.lam ** 2
    assert details["nu_top_unit"]


def test_cyclotomic_p2_l2():
    scn, details = cyclotomic_scenario(2, 2)
    ctx = scn.ctx
    zeta = ctx.gen()
    lam = ctx.one - zeta
    # u_1 = 1 + zeta has valuation 1: not a unit (inverse (1-zeta)/2 is not integral)
    assert details["u"][1] == ctx.one + zeta
    assert details["u_units"] == [False, False]
    # nu_1 = u_2/u_1 is the unit zeta
    assert details["nu"][1] == zeta or ctx.is_unit(details["nu"][1])
    assert details["nu_top_unit"]
    # relation (1.1) was certified by psi_build inside the scenario
    assert scn.nu[0] == details["nu"][0]


def test_cyclotomic_reduces_to_z4_scenario():
    # criterion-14 provenance: the (2,1) data reduced mod 4 is lam=2, nu_0=1
    scn, details = cyclotomic_scenario(2, 1)
    from wittlab.rings import ring_make

    z4 = ring_make("zmod:4")
    bind = {"T": z4.from_int(3)}  # T -> -1 kills T + 1
    assert scn.ctx.specialize(scn.lam, bind, z4) == z4.from_int(2)
    assert scn.ctx.specialize(scn.nu[0], bind, z4) == z4.one


def test_remark_1_1_fragments():
    for p, l in ((2, 1), (2, 2), (3, 1)):
        frag = check_remark_1_1(p, l)
        assert frag.verdict == "pass", frag.witness
