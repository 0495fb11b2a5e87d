"""Verification scenarios: the (p, l, m, cap, ring, lam, nu, a) bundles.

A scenario is validated on construction: the nu-relation (through
psi_build), the defining property of a (through make_a's dual-route
check), and the nu_0 = a_0 convention when both sides are pinned.
Universal scenarios live over Q[v_0.., L, L^-1] with each nu_k bound to
p^{l-k} L^{p^k - p^l}; concrete ones over any finite or cyclotomic ring.
"""

import random

from ..ahdeform import psi_build
from ..errors import NotAUnit, ScenarioInvalid, UnsupportedCtx
from ..rings.ctx import SymbolicLaurentRing
from ..rings.parse import parse_elem, ring_make
from ..rings.qpoly import QPoly
from ..witt import WittVec, make_a, scalar_int, t_map, teichmuller

DEFAULT_BUDGETS = {"enumeration": 200000, "branch": 50000}
DEFAULT_CAPS = {2: 12, 3: 9}


def universal_ring(p, l, extra=()):
    """Q[extra.., L, nu_0..nu_{l-1}] with nu_k bound to p^{l-k} L^{p^k-p^l}."""
    gens = tuple(extra) + ("L",) + tuple(f"nu{k}" for k in range(l))
    n = len(gens)
    lidx = len(extra)
    subs = {
        f"nu{k}": QPoly.monomial(n, tuple(p ** k - p ** l if i == lidx else 0 for i in range(n)), p ** (l - k))
        for k in range(l)
    }
    return SymbolicLaurentRing(p, gens, ("L",), subs)


class Scenario:
    def __init__(self, name, p, l, m, cap, ctx, lam, nu, a, psi, kind,
                 test_algebras=(), seeds=(), budgets=None, ring_spec=None):
        self.name = name
        self.p = p
        self.l = l
        self.m = m
        self.cap = cap
        self.ctx = ctx
        self.lam = lam
        self.nu = list(nu)
        self.a = a
        self.psi = psi
        self.kind = kind
        self.test_algebras = list(test_algebras)
        self.seeds = list(seeds)
        self.budgets = dict(DEFAULT_BUDGETS, **(budgets or {}))
        self.ring_spec = ring_spec or ctx.describe()

    @property
    def mu(self):
        """lam^{p^l}, the downstairs deformation parameter."""
        return self.psi.lam_power()

    def generic_vector(self, length=None, prefix="v"):
        if self.kind != "universal":
            raise ScenarioInvalid("generic vectors need a universal scenario")
        length = length if length is not None else self.m
        return WittVec(self.p, self.ctx, [self.ctx.gen(f"{prefix}{i}") for i in range(length)])

    def window_length(self):
        """Components that can influence the degree window: K + 1."""
        k = 0
        while self.p ** (k + 1) <= self.cap:
            k += 1
        return k + 1

    def all_vectors(self, length, budget=None):
        """Every Witt vector of the given length, deterministic order."""
        if not self.ctx.is_finite():
            raise UnsupportedCtx("enumeration needs a finite ring")
        n = self.ctx.size()
        total = n ** length
        budget = budget if budget is not None else self.budgets["enumeration"]
        if total > budget:
            from ..errors import BudgetExceeded

            raise BudgetExceeded(f"{total} vectors exceed the enumeration budget {budget}")
        for idx in range(total):
            comps = []
            k = idx
            for _ in range(length):
                comps.append(self.ctx.element_at(k % n))
                k //= n
            yield WittVec(self.p, self.ctx, comps)

    def sample_vectors(self, length, count, seed=0):
        rng = random.Random(seed)
        if self.ctx.is_finite():
            n = self.ctx.size()
            for _ in range(count):
                yield WittVec(self.p, self.ctx, [self.ctx.element_at(rng.randrange(n)) for _ in range(length)])
        else:
            from ..rings.ctx import SamplePolicy

            policy = SamplePolicy(int_bound=9, degree=2, terms=2, coeff_bound=5)
            for _ in range(count):
                yield WittVec(
                    self.p, self.ctx, [self.ctx.sample(rng.randrange(1 << 30), policy) for _ in range(length)]
                )

    def __repr__(self):
        return f"Scenario({self.name}: p={self.p}, l={self.l}, m={self.m}, cap={self.cap}, {self.ring_spec})"


def build_scenario(cfg):
    """Validate and construct a Scenario from its flat config dict."""
    name = cfg.get("name", "unnamed")
    try:
        p, l = int(cfg["p"]), int(cfg["l"])
    except KeyError as exc:
        raise ScenarioInvalid(f"{name}: missing field {exc}") from exc
    cap = int(cfg.get("cap", DEFAULT_CAPS.get(p, 9)))
    kind = cfg.get("kind", "concrete")
    budgets = cfg.get("budgets")
    seeds = cfg.get("seeds", list(range(8)))

    if kind == "universal":
        m = int(cfg.get("m", _window_length(p, cap)))
        ctx = universal_ring(p, l, extra=tuple(f"v{i}" for i in range(m)))
        lam = ctx.gen("L")
        nu = [ctx.gen(f"nu{k}") for k in range(l)]
        psi = psi_build(p, l, lam, nu)
        a = make_a(p, lam, l, m, nu0=nu[0])
        return Scenario(name, p, l, m, cap, ctx, lam, nu, a, psi, kind,
                        seeds=seeds, budgets=budgets, ring_spec="universal")

    if kind != "concrete":
        raise ScenarioInvalid(f"{name}: unknown scenario kind {kind!r}")
    m = int(cfg.get("m", 2))
    ring_spec = cfg["ring"]
    ctx = ring_make(ring_spec)
    lam = parse_elem(ctx, cfg["lam"])
    nu = [parse_elem(ctx, s) for s in cfg["nu"]]
    if len(nu) != l:
        raise ScenarioInvalid(f"{name}: need {l} nu values")
    psi = psi_build(p, l, lam, nu)  # RelationViolated propagates with its k
    a_cfg = cfg.get("a", "derive")
    if a_cfg == "derive":
        a = make_a(p, lam, l, m, nu0=nu[0])
    else:
        a = WittVec(p, ctx, [parse_elem(ctx, s) for s in a_cfg])
        _validate_given_a(p, ctx, lam, nu, a, l)
    test_algebras = []
    for spec in cfg.get("test_algebras", ()):
        test_algebras.append((spec, ring_make(spec)))
    return Scenario(name, p, l, m, cap, ctx, lam, nu, a, psi, kind,
                    test_algebras=test_algebras, seeds=seeds, budgets=budgets,
                    ring_spec=ring_spec)


def _window_length(p, cap):
    k = 0
    while p ** (k + 1) <= cap:
        k += 1
    return k + 1


def _validate_given_a(p, ctx, lam, nu, a, l):
    mu = lam ** (p ** l)
    b = scalar_int(p ** l, teichmuller(p, lam, len(a)))
    if t_map(a, teichmuller(p, mu, len(a))) != b:
        raise ScenarioInvalid("given a fails T_a([lam^{p^l}]) = p^l[lam]")
    if a.comps[0] != nu[0]:
        raise ScenarioInvalid("convention nu_0 = a_0 violated by the given a")


def base_change_elem(x, target):
    """Image of x under the canonical map into a target algebra.

    Supported: Z/m sources into any Z/m-algebra (via integer lifts) and
    p-local quotient sources via specialize with a declared binding.
    """
    ctx = x.ctx
    from ..rings.ctx import ModRing

    if ctx == target:
        return x
    if isinstance(ctx, ModRing):
        if not target.from_int(ctx.m).is_zero():
            raise UnsupportedCtx(f"{target} is not a Z/{ctx.m}-algebra")
        return target.from_int(x.payload)
    raise UnsupportedCtx(f"no canonical base change from {ctx}")


def base_change_scenario(scn, spec, target):
    """The same scenario data over a test algebra B."""
    lam = base_change_elem(scn.lam, target)
    nu = [base_change_elem(c, target) for c in scn.nu]
    a = WittVec(scn.p, target, [base_change_elem(c, target) for c in scn.a.comps])
    psi = psi_build(scn.p, scn.l, lam, nu)
    return Scenario(
        f"{scn.name}@{spec}", scn.p, scn.l, scn.m, scn.cap, target, lam, nu, a, psi,
        "concrete", seeds=scn.seeds, budgets=scn.budgets, ring_spec=spec,
    )


# ---- the cyclotomic construction ------------------------------------------

CYCLOTOMIC_BOUNDS = {2: 2, 3: 1}


def cyclotomic_scenario(p, l, m=2, cap=None, bounds=None):
    """Scenario over Z_(p)[zeta_{p^l}] with lam = 1 - zeta and nu_k = u_l/u_k.

    Computes u_k by exact division of p^k by lam^{p^k - 1}, certifies
    p-integrality of every u_k and nu_k, records which u_k are units, and
    checks that nu_{l-1} is one.  Returns (scenario, details).
    """
    bounds = bounds or CYCLOTOMIC_BOUNDS
    if l < 1 or l > bounds.get(p, 0):
        raise ScenarioInvalid(f"cyclotomic scenario bound exceeded for p={p}, l={l}")
    cap = cap if cap is not None else DEFAULT_CAPS.get(p, 9)
    deg_step = p ** (l - 1)
    terms = " + ".join("1" if j == 0 else f"T^{j * deg_step}" for j in range(p))
    spec = f"polyquot:plocal:{p};{terms}"
    ctx = ring_make(spec)
    zeta = ctx.gen()
    lam = ctx.one - zeta

    u = [ctx.one]
    unit_verdicts = []
    for k in range(1, l + 1):
        uk = ctx.exact_div(ctx.from_int(p ** k), lam ** (p ** k - 1))
        if not ctx.is_p_integral(uk):
            raise ScenarioInvalid(f"u_{k} is not p-integral")
        if ctx.from_int(p ** k) != uk * lam ** (p ** k - 1):
            raise ScenarioInvalid(f"u_{k} fails p^k = u_k lam^(p^k-1)")
        u.append(uk)
        unit_verdicts.append(ctx.is_unit(uk))

    nu = []
    for k in range(l):
        nuk = ctx.exact_div(u[l], u[k])
        if not ctx.is_p_integral(nuk):
            raise ScenarioInvalid(f"nu_{k} is not p-integral")
        nu.append(nuk)
    try:
        ctx.inv(nu[l - 1])
        nu_top_unit = True
    except NotAUnit:
        nu_top_unit = False

    psi = psi_build(p, l, lam, nu)  # re-checks the relation exactly
    a = make_a(p, lam, l, m, nu0=nu[0])
    scn = Scenario(
        f"cyclotomic_p{p}_l{l}", p, l, m, cap, ctx, lam, nu, a, psi, "concrete", ring_spec=spec
    )
    details = {
        "u": u,
        "u_units": unit_verdicts,
        "nu": nu,
        "nu_top_unit": nu_top_unit,
        "lam": lam,
    }
    return scn, details
