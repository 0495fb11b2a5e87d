"""Executable verifiers: one report fragment per lemma-level claim.

Every verifier returns a Fragment with verdict pass, fail (carrying a
witness), or inconclusive (budget or solver limits; never silently
dropped).  Universal scenarios run the symbolic identities; concrete
ones enumerate or sample and go through certified specialization.
"""

from ..ahdeform import ep_vec, fp_vec, gp, psi_hom_check, ptilde
from ..errors import AmbiguousSolution, BudgetExceeded, Unsolvable, UnsupportedCtx
from ..series import TruncSeries, psi_adic_expand, s_subst, to_literal
from ..witt import f_lambda, t_map, teichmuller, zero_extend
from .cocycle import Cocycle2, b2_membership, coboundary, pullback_psi
from .kernels import diagram_checks, exact_seq_check, kernel_enum, kernel_is_subgroup
from .nl import cartier_pairing, nl_algebra
from .scenario import base_change_scenario, cyclotomic_scenario


class Fragment:
    def __init__(self, check, scenario, verdict, witness=None, details=None):
        self.check = check
        self.scenario = scenario
        self.verdict = verdict  # "pass" | "fail" | "inconclusive"
        self.witness = witness
        self.details = details or {}

    def as_dict(self):
        out = {"check": self.check, "scenario": self.scenario, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = str(self.witness)
        if self.details:
            out["details"] = _plain(self.details)
        return out

    def __repr__(self):
        return f"Fragment({self.check}/{self.scenario}: {self.verdict})"


def _plain(value):
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    return repr(value)


def _test_vectors(scn, length, limit=64):
    """Deterministic vector stream: full enumeration when small, else seeds."""
    if scn.kind == "universal":
        return [scn.generic_vector(min(length, scn.m))]
    if scn.ctx.is_finite() and scn.ctx.size() ** length <= limit:
        return list(scn.all_vectors(length))
    return list(scn.sample_vectors(length, 8, seed=scn.seeds[0] if scn.seeds else 0))


def check_psi_identity(scn):
    """lam^{p^l} psi(X) = (1+lam X)^{p^l} - 1 as an exact polynomial identity."""
    psi = scn.psi
    cap = psi.degree
    ctx = scn.ctx
    x = TruncSeries.gen(ctx, ("X",), cap, "X")
    one = TruncSeries.one(ctx, ("X",), cap)
    lhs = psi.series(("X",), cap) * psi.lam_power()
    rhs = (one + x * scn.lam) ** psi.degree - one
    if lhs == rhs:
        return Fragment("psi_identity", scn.name, "pass", details={"degree": psi.degree})
    return Fragment("psi_identity", scn.name, "fail", witness=to_literal(lhs - rhs))


def check_psi_hom(scn):
    ok, witness = psi_hom_check(scn.psi, scn.cap)
    if ok:
        return Fragment("psi_hom", scn.name, "pass")
    return Fragment("psi_hom", scn.name, "fail", witness=f"first mismatch at {witness}")


def check_l4_1(scn):
    """G(x, mu; E) = 1 for E = E([mu], mu; psi(X))."""
    psi, mu, cap = scn.psi, scn.mu, scn.cap
    ctx = scn.ctx
    arg = psi.series(("X",), cap, var="X")
    u_inner = teichmuller(scn.p, mu, scn.window_length() + 1)
    e = TruncSeries.one(ctx, ("X",), cap) + arg * mu
    if scn.kind == "universal":
        x = scn.generic_vector(prefix="v")
        g = gp(x, mu, e, mu, u_inner, cap, arg=arg)
        if g == TruncSeries.one(ctx, ("X",), cap):
            return Fragment("L4_1", scn.name, "pass")
        return Fragment("L4_1", scn.name, "fail", witness=to_literal(g - TruncSeries.one(ctx, ("X",), cap)))
    # concrete rings cannot divide by p; the exponents never act because
    # numerator and denominator of every G factor agree exactly
    k = 1
    while scn.p ** k <= cap:
        num = TruncSeries.one(ctx, ("X",), cap) + (e - TruncSeries.one(ctx, ("X",), cap)) ** (scn.p ** k)
        den = s_subst(ptilde(k, u_inner, mu, cap, vars_=("T",), var="T"), {"T": arg})
        if num != den:
            return Fragment("L4_1", scn.name, "fail", witness=f"factor k={k} ratio differs")
        k += 1
    return Fragment("L4_1", scn.name, "pass", details={"factors": k - 1})


def check_l4_2(scn):
    """E(v, mu; psi(T)) = E(T_a v, lam; T) on enumerated/generic vectors."""
    psi, cap = scn.psi, scn.cap
    psit = psi.series(("T",), cap, var="T")
    ext = scn.window_length()
    checked = 0
    for v in _test_vectors(scn, scn.m):
        v_ext = zero_extend(v, max(len(v), ext))
        lhs = s_subst(ep_vec(v_ext, scn.mu, cap, vars_=("T",), var="T"), {"T": psit})
        rhs = ep_vec(t_map(scn.a, v_ext), scn.lam, cap, vars_=("T",), var="T")
        if lhs != rhs:
            return Fragment("L4_2", scn.name, "fail", witness=f"v = {v!r}")
        checked += 1
    return Fragment("L4_2", scn.name, "pass", details={"vectors": checked})


def check_l4_3(scn):
    """F(F^mu w, mu; psi X, psi Y) = F(F^lam T_a w, lam; X, Y), constructive."""
    psi, cap = scn.psi, scn.cap
    ext = max(scn.m + 1, scn.window_length() + 1)
    checked = 0
    vectors = [scn.generic_vector(prefix="v")] if scn.kind == "universal" else _test_vectors(scn, scn.m + 1, limit=64)
    for w in vectors:
        w_ext = zero_extend(w, max(len(w), ext))
        v = f_lambda(scn.mu, w_ext)
        u = f_lambda(scn.lam, t_map(scn.a, w_ext))
        lhs = pullback_psi(Cocycle2(fp_vec(v, scn.mu, cap), scn.mu, check=False), psi)
        rhs = fp_vec(u, scn.lam, cap)
        if lhs.series != rhs:
            return Fragment("L4_3", scn.name, "fail", witness=f"w = {w!r}")
        checked += 1
    return Fragment("L4_3", scn.name, "pass", details={"vectors": checked})


def check_cocycle_identity(scn):
    """F(F^lam v, lam; X, Y) E(v; X.Y) = E(v; X) E(v; Y), plus invariants."""
    cap = scn.cap
    ctx = scn.ctx
    ext = scn.window_length() + 1
    from ..ahdeform import DeformLaw

    law = DeformLaw(scn.lam)
    xy = law.xy(("X", "Y"), cap)
    checked = 0
    for v in _test_vectors(scn, scn.m, limit=16):
        v_ext = zero_extend(v, max(len(v), ext))
        ex = ep_vec(v_ext, scn.lam, cap, vars_=("X", "Y"), var="X")
        ey = ep_vec(v_ext, scn.lam, cap, vars_=("X", "Y"), var="Y")
        et = ep_vec(v_ext, scn.lam, cap, vars_=("T",), var="T")
        exy = s_subst(et, {"T": xy})
        c = Cocycle2(fp_vec(f_lambda(scn.lam, v_ext), scn.lam, cap), scn.lam)
        if c.series * exy != ex * ey:
            return Fragment("cocycle_identity", scn.name, "fail", witness=f"v = {v!r}")
        if not c.cocycle_condition():
            return Fragment("cocycle_identity", scn.name, "fail", witness=f"cocycle condition at v = {v!r}")
        checked += 1
    return Fragment("cocycle_identity", scn.name, "pass", details={"vectors": checked})


def check_l4_5_roundtrip(scn):
    """psi-adic descent: expand E(T_a w, lam; T) and rebuild it exactly."""
    psi, cap = scn.psi, scn.cap
    psit = psi.series(("T",), cap, var="T")
    kmax = cap // psi.min_degree()
    ext = scn.window_length()
    checked, ambiguous = 0, 0
    for w in _test_vectors(scn, scn.m, limit=16):
        w_ext = zero_extend(w, max(len(w), ext))
        e1 = ep_vec(t_map(scn.a, w_ext), scn.lam, cap, vars_=("T",), var="T")
        try:
            d = psi_adic_expand(e1, psit, kmax, budget=scn.budgets["branch"])
        except Unsolvable:
            return Fragment("L4_5_roundtrip", scn.name, "fail", witness=f"w = {w!r} not psi-adic")
        except AmbiguousSolution as exc:
            d = list(exc.solutions[0])
            ambiguous += 1
        except BudgetExceeded:
            return Fragment("L4_5_roundtrip", scn.name, "inconclusive", witness="branch budget")
        rebuilt = TruncSeries.zero(scn.ctx, ("T",), cap)
        for k, dk in enumerate(d):
            rebuilt = rebuilt + (psit ** k) * dk
        if rebuilt != e1:
            return Fragment("L4_5_roundtrip", scn.name, "fail", witness=f"re-substitution differs at w = {w!r}")
        # the coefficients must be the window of E(w, mu; S)
        e_down = ep_vec(w_ext, scn.mu, kmax, vars_=("T",), var="T")
        if ambiguous == 0:
            got = [d[k] for k in range(kmax + 1)]
            want = [e_down.coefficient((k,)) for k in range(kmax + 1)]
            if got != want:
                return Fragment("L4_5_roundtrip", scn.name, "fail", witness=f"descent coefficients differ at w = {w!r}")
        checked += 1
    verdict = "pass"
    return Fragment("L4_5_roundtrip", scn.name, verdict, details={"vectors": checked, "ambiguous": ambiguous})


def check_l4_7(scn):
    """Ker(F^mu) = Ker(F^lam o T_a) setwise, exhaustively, plus closure."""
    try:
        k1 = kernel_enum(scn, "f_lambda_pl")
        k2 = kernel_enum(scn, "f_lambda_compose_t")
    except (BudgetExceeded, UnsupportedCtx) as exc:
        return Fragment("L4_7", scn.name, "inconclusive", witness=str(exc))
    same = set(k1) == set(k2)
    closed = kernel_is_subgroup(scn, k1)
    if same and closed:
        return Fragment("L4_7", scn.name, "pass", details={"kernel_size": len(k1)})
    witness = "kernels differ" if not same else "kernel not closed under addition"
    return Fragment("L4_7", scn.name, "fail", witness=witness)


def check_seq_4_10(scn):
    frags = []
    for name, target in [(scn.ring_spec, None)] + scn.test_algebras:
        try:
            here = scn if target is None else base_change_scenario(scn, name, target)
            details = exact_seq_check(here)
        except (BudgetExceeded, UnsupportedCtx) as exc:
            frags.append(Fragment("seq_4_10", f"{scn.name}@{name}", "inconclusive", witness=str(exc)))
            continue
        verdict = "pass" if details.pop("ok") else "fail"
        frags.append(Fragment("seq_4_10", f"{scn.name}@{name}", verdict, details=details))
    return frags


def check_diagram_4_11(scn):
    frags = []
    for name, target in [(scn.ring_spec, None)] + scn.test_algebras:
        try:
            here = scn if target is None else base_change_scenario(scn, name, target)
            details = diagram_checks(here)
        except (BudgetExceeded, UnsupportedCtx) as exc:
            frags.append(Fragment("diagram_4_11", f"{scn.name}@{name}", "inconclusive", witness=str(exc)))
            continue
        verdict = "pass" if details.pop("ok") else "fail"
        frags.append(Fragment("diagram_4_11", f"{scn.name}@{name}", verdict, details=details))
    return frags


def check_nl_rank(scn, expect_rank=None, expect_nil=None):
    try:
        alg = nl_algebra(scn)
    except Exception as exc:  # HypothesisViolated and friends
        return Fragment("nl_rank", scn.name, "fail", witness=str(exc))
    nil = alg.nilpotency_index_of_x()
    details = {"rank": alg.rank, "nilpotency_index": nil}
    if expect_rank is not None and alg.rank != expect_rank:
        return Fragment("nl_rank", scn.name, "fail", witness=f"rank {alg.rank} != {expect_rank}", details=details)
    if expect_nil is not None and nil != expect_nil:
        return Fragment("nl_rank", scn.name, "fail", witness=f"nilpotency {nil} != {expect_nil}", details=details)
    return Fragment("nl_rank", scn.name, "pass", details=details)


def pairing_table(scn):
    """phi on M-classes against group-likes, per algebra; bijectivity verdict.

    Returns (rows, verdicts): rows is a list of dicts, one per (algebra,
    class); verdicts maps algebra name to a bool triple.
    """
    from .kernels import FiniteQuotient, image_set, _canon_key
    from ..witt import witt_add

    rows = []
    verdicts = {}
    for name, target in [(scn.ring_spec, None)] + scn.test_algebras:
        here = scn if target is None else base_change_scenario(scn, name, target)
        alg = nl_algebra(here)
        k_mu = kernel_enum(here, "f_lambda_pl")
        k_lam = kernel_enum(here, "f_lambda")
        im_ta = image_set(here, lambda w: t_map(here.a, w), here.m)
        quotient = FiniteQuotient(here, here.m, sorted(im_ta, key=_canon_key))
        class_reps = {}
        for v in k_lam:
            class_reps.setdefault(quotient.class_of(v), v)
        images = {}
        all_stable = True
        all_grouplike = True
        for rep_class, v in sorted(class_reps.items(), key=lambda kv: _canon_key(kv[0])):
            e, grouplike, stable = cartier_pairing(here, alg, v, kernel_mu=k_mu)
            images[rep_class] = e
            all_grouplike = all_grouplike and grouplike
            all_stable = all_stable and stable
            rows.append(
                {
                    "algebra": name,
                    "class_rep": repr(v),
                    "value": _alg_literal(alg, e),
                    "grouplike": grouplike,
                    "stable": stable,
                }
            )
        everything = alg.all_grouplikes()
        injective = len(set(images.values())) == len(images)
        surjective = set(images.values()) == set(everything)
        verdicts[name] = {
            "classes": len(images),
            "grouplikes": len(everything),
            "injective": injective,
            "surjective": surjective,
            "all_grouplike": all_grouplike,
            "well_defined": all_stable,
            "bijective": injective and surjective and all_grouplike and all_stable,
        }
    return rows, verdicts


def _alg_literal(alg, e):
    parts = []
    for i, c in enumerate(e):
        if c.is_zero():
            continue
        cs = alg.ctx.format_elem(c)
        mono = "1" if i == 0 else ("X" if i == 1 else f"X^{i}")
        parts.append(mono if cs == "1" and i > 0 else (cs if i == 0 else f"{cs}*{mono}"))
    return " + ".join(parts) if parts else "0"


def check_cartier(scn):
    try:
        _, verdicts = pairing_table(scn)
    except (BudgetExceeded, UnsupportedCtx) as exc:
        return Fragment("cartier", scn.name, "inconclusive", witness=str(exc))
    except Exception as exc:
        return Fragment("cartier", scn.name, "fail", witness=str(exc))
    ok = all(v["bijective"] for v in verdicts.values())
    return Fragment("cartier", scn.name, "pass" if ok else "fail", details=verdicts)


def check_theorem_1_4(scn):
    """If the pullback is a cap-coboundary then so is the original.

    Enumerates W_m (or samples); counts inconclusive memberships, which
    must stay a minority; any certified-pullback with refuted original is
    a failure of the theorem's executable content.
    """
    cap = scn.cap
    psi = scn.psi
    budget = scn.budgets["branch"]
    ext = scn.window_length()
    total = fails = inconclusive = certified_pairs = 0
    witness = None
    nu0_zero = scn.nu[0].is_zero()
    for v in _test_vectors(scn, scn.m, limit=scn.budgets["enumeration"]):
        total += 1
        v_ext = zero_extend(v, max(len(v), ext))
        c = Cocycle2(fp_vec(v_ext, scn.mu, cap), scn.mu, check=False)
        pulled = pullback_psi(c, psi)
        rp = b2_membership(pulled, branch_budget=budget)
        rc = b2_membership(c, branch_budget=budget)
        if rc.certified:
            # constructive converse: the composed generator certifies the pullback
            composed = s_subst(rc.certificate.generator, {"T": psi.series(("T",), cap, var="T")})
            if coboundary(composed, scn.lam).series != pulled.series:
                fails += 1
                witness = witness or f"pullback of certificate fails at v = {v!r}"
                continue
            certified_pairs += 1
            continue
        if rp.status == "certified":
            if rc.status == "refuted":
                fails += 1
                witness = witness or f"injectivity violated at v = {v!r}"
            else:
                inconclusive += 1
        elif rp.status == "inconclusive" or rc.status == "inconclusive":
            inconclusive += 1
    details = {
        "vectors": total,
        "coboundary_pairs": certified_pairs,
        "inconclusive": inconclusive,
        "nu0_branch": "zero" if nu0_zero else "unit",
    }
    if nu0_zero:
        descent = check_l4_5_roundtrip(scn)
        details["descent"] = descent.verdict
        if descent.verdict == "fail":
            return Fragment("theorem_1_4", scn.name, "fail", witness=descent.witness, details=details)
    if fails:
        return Fragment("theorem_1_4", scn.name, "fail", witness=witness, details=details)
    if total and inconclusive / total >= 0.2:
        return Fragment("theorem_1_4", scn.name, "inconclusive",
                        witness=f"{inconclusive}/{total} inconclusive", details=details)
    return Fragment("theorem_1_4", scn.name, "pass", details=details)


def check_remark_1_1(p, l):
    """The cyclotomic data: u_k exist, relation (1.1), nu_{l-1} a unit."""
    name = f"cyclotomic_p{p}_l{l}"
    try:
        scn, details = cyclotomic_scenario(p, l)
    except Exception as exc:
        return Fragment("remark_1_1", name, "fail", witness=str(exc))
    out = {
        "u_units": details["u_units"],
        "nu_top_unit": details["nu_top_unit"],
        "lam": repr(details["lam"]),
        "nu": [repr(x) for x in details["nu"]],
    }
    # psi_build inside the scenario already certified relation (1.1)
    if not details["nu_top_unit"]:
        return Fragment("remark_1_1", name, "fail", witness="nu_{l-1} is not a unit", details=out)
    return Fragment("remark_1_1", name, "pass", details=out)


CHECKS_UNIVERSAL = ("psi_identity", "psi_hom", "L4_1", "L4_2", "L4_3", "cocycle_identity")
CHECKS_FINITE = (
    "psi_identity",
    "psi_hom",
    "L4_1",
    "L4_2",
    "L4_3",
    "cocycle_identity",
    "L4_5_roundtrip",
    "L4_7",
    "seq_4_10",
    "diagram_4_11",
    "theorem_1_4",
)
CHECKS_NL = ("nl_rank", "cartier")


def run_check(check, scn):
    """Dispatch a named check; returns a list of fragments."""
    table = {
        "psi_identity": check_psi_identity,
        "psi_hom": check_psi_hom,
        "L4_1": check_l4_1,
        "L4_2": check_l4_2,
        "L4_3": check_l4_3,
        "cocycle_identity": check_cocycle_identity,
        "L4_5_roundtrip": check_l4_5_roundtrip,
        "L4_7": check_l4_7,
        "nl_rank": check_nl_rank,
        "cartier": check_cartier,
        "theorem_1_4": check_theorem_1_4,
    }
    if check == "seq_4_10":
        return check_seq_4_10(scn)
    if check == "diagram_4_11":
        return check_diagram_4_11(scn)
    out = table[check](scn)
    return [out]
