"""Symmetric 2-cocycles for the x+y+lam*xy law, and coboundary membership.

The membership solver works degree by degree: writing the candidate
generator as F = 1 + c_1 T + ... + c_D T^D, the coefficient equations at
total degree d are binom(d, i) * c_d = R_{i,j} for each mixed monomial
X^i Y^j (the pure-power rows are consistency conditions).  Over rings
with zero divisors the solution set at a degree can be empty, a point, or
several points; the solver branches within a node budget and certifies
the first completed generator (membership is existential).  Verdicts:

  certified     a generator was found and re-verified
  refuted       the search was complete (finite ring, no budget hit,
                no canonical shortcut) and found nothing
  inconclusive  budget exhausted, or an infinite ring forced the
                canonical zero choice at an unconstrained degree
"""

from ..ahdeform import DeformLaw, PsiPoly
from ..errors import NonUnitConstantTerm, NotAUnit, ScenarioInvalid
from ..linalg import linear_solutions
from ..rings.rat import binom_int
from ..series import TruncSeries, s_inv, s_subst


class Cocycle2:
    """A symmetric normalized 2-cocycle window for a fixed deformation."""

    def __init__(self, series, lam, reliable_deg=None, check=True):
        self.series = series
        self.lam = lam
        self.reliable_deg = series.cap if reliable_deg is None else reliable_deg
        if check:
            self._check_cheap()

    def _check_cheap(self):
        f = self.series
        if f.vars != ("X", "Y"):
            raise ScenarioInvalid("cocycles live in (X, Y)")
        if f.constant_term() != f.ctx.one:
            raise ScenarioInvalid("cocycle constant term must be 1")
        for (i, j), c in f.coeffs.items():
            if f.coefficient((j, i)) != c:
                raise ScenarioInvalid(f"cocycle is not symmetric at {(i, j)}")
            if j == 0 and i > 0 and not c.is_zero():
                raise ScenarioInvalid(f"cocycle is not normalized: X^{i} survives at Y=0")

    def cocycle_condition(self):
        """Exact three-variable check F(X,Y) F(X.Y,Z) = F(Y,Z) F(X,Y.Z)."""
        f = self.series
        ctx, cap = f.ctx, f.cap
        vars3 = ("X", "Y", "Z")
        law = DeformLaw(self.lam)
        x = TruncSeries.gen(ctx, vars3, cap, "X")
        y = TruncSeries.gen(ctx, vars3, cap, "Y")
        z = TruncSeries.gen(ctx, vars3, cap, "Z")
        f_xy = f.map_vars(vars3)
        f_yz = f.map_vars(vars3, rename={"X": "Y", "Y": "Z"})
        f_xy_z = s_subst(f, {"X": law.compose(x, y), "Y": z})
        f_x_yz = s_subst(f, {"X": x, "Y": law.compose(y, z)})
        return f_xy * f_xy_z == f_yz * f_x_yz

    def __eq__(self, other):
        if not isinstance(other, Cocycle2):
            return NotImplemented
        return self.series == other.series and self.lam == other.lam

    def __repr__(self):
        return f"Cocycle2(cap={self.series.cap})"


class CoboundaryCertificate:
    def __init__(self, generator, lam):
        self.generator = generator
        self.lam = lam

    def boundary(self):
        return coboundary(self.generator, self.lam)

    def verify(self, target):
        return self.boundary().series == target.series


class MembershipResult:
    def __init__(self, status, certificate=None, branches=0, reason=None):
        self.status = status  # "certified" | "refuted" | "inconclusive"
        self.certificate = certificate
        self.branches = branches
        self.reason = reason

    @property
    def certified(self):
        return self.status == "certified"

    def __repr__(self):
        return f"MembershipResult({self.status}, branches={self.branches})"


def coboundary(gen, lam):
    """The cocycle F(X)F(Y)/F(X.Y) of a unit-constant generator F(T).

    The generator is normalized to F(0) = 1 first, which fixes the
    cocycle's own normalization and loses nothing: constants scale the
    boundary by a unit without leaving the coboundary subgroup.
    """
    ctx, cap = gen.ctx, gen.cap
    c0 = gen.constant_term()
    try:
        c0inv = ctx.inv(c0)
    except NotAUnit as exc:
        raise NonUnitConstantTerm("coboundary generator needs a unit constant term") from exc
    f = gen * c0inv
    law = DeformLaw(lam)
    fx = f.map_vars(("X", "Y"), rename={"T": "X"})
    fy = f.map_vars(("X", "Y"), rename={"T": "Y"})
    fxy = s_subst(f, {"T": law.xy(("X", "Y"), cap)})
    return Cocycle2(fx * fy * s_inv(fxy), lam)


def pullback_psi(c, psi):
    """Substitute psi into both variables: a cocycle for the upstairs law."""
    if not isinstance(psi, PsiPoly):
        raise ScenarioInvalid("pullback needs the isogeny polynomial")
    if c.lam != psi.lam_power():
        raise ScenarioInvalid("cocycle law does not match psi's target law")
    cap = c.series.cap
    vars2 = ("X", "Y")
    px = psi.series(vars2, cap, var="X")
    py = psi.series(vars2, cap, var="Y")
    pulled = s_subst(c.series, {"X": px, "Y": py})
    return Cocycle2(pulled, psi.lam, reliable_deg=min(c.reliable_deg, cap))


def b2_membership(c, branch_budget=50000):
    """Decide cap-level membership of c in the coboundary subgroup."""
    f = c.series
    ctx, cap = f.ctx, f.cap
    law = DeformLaw(c.lam)
    xy = law.xy(("X", "Y"), cap)
    xy_pows = [TruncSeries.one(ctx, ("X", "Y"), cap)]
    for _ in range(cap):
        xy_pows.append(xy_pows[-1] * xy)

    finite = ctx.is_finite()
    state = {"branches": 0, "shortcut": False, "budget_hit": False}

    def boundary_parts(coeffs):
        """(F(X)F(Y), C * F(X.Y)) for the partial generator."""
        gen_x = {}
        gen_y = {}
        for d, cd in coeffs.items():
            gen_x[(d, 0)] = cd
            gen_y[(0, d)] = cd
        one = TruncSeries.one(ctx, ("X", "Y"), cap)
        fx = one + TruncSeries(ctx, ("X", "Y"), cap, gen_x)
        fy = one + TruncSeries(ctx, ("X", "Y"), cap, gen_y)
        fxy = one
        for d, cd in coeffs.items():
            fxy = fxy + xy_pows[d] * cd
        return fx * fy, f * fxy

    def solutions_at(d, coeffs):
        lhs, rhs = boundary_parts(coeffs)
        residual = lhs - rhs
        sols = None
        for i in range(d + 1):
            j = d - i
            r = residual.coefficient((i, j))
            if i == 0 or j == 0:
                if not r.is_zero():
                    return []  # consistency row failed: dead branch
                continue
            a = ctx.from_int(binom_int(d, i))
            if not finite and a.is_zero():
                if r.is_zero():
                    continue
                return []
            here = linear_solutions(ctx, a, r)
            if sols is None:
                sols = here
            else:
                sols = [s for s in sols if s in here]
            if not sols:
                return []
        if sols is None:
            # unconstrained degree (d = 1, or every mixed row vanished)
            if finite:
                return list(ctx.elements())
            state["shortcut"] = True
            return [ctx.zero]
        return sols

    found = []

    def descend(d, coeffs):
        if found:
            return
        state["branches"] += 1
        if state["branches"] > branch_budget:
            state["budget_hit"] = True
            return
        if d > cap:
            lhs, rhs = boundary_parts(coeffs)
            if lhs == rhs:
                found.append(dict(coeffs))
            return
        for cd in solutions_at(d, coeffs):
            nxt = dict(coeffs)
            if not cd.is_zero():
                nxt[d] = cd
            descend(d + 1, nxt)
            if found or state["budget_hit"]:
                return

    descend(1, {})

    if found:
        terms = {(0,): ctx.one}
        for d, cd in found[0].items():
            terms[(d,)] = cd
        gen = TruncSeries(ctx, ("T",), cap, terms)
        cert = CoboundaryCertificate(gen, c.lam)
        if not cert.verify(c):
            raise ScenarioInvalid("internal: certificate failed re-verification")
        return MembershipResult("certified", cert, state["branches"])
    if state["budget_hit"]:
        return MembershipResult("inconclusive", None, state["branches"], reason="branch budget exhausted")
    if state["shortcut"] or not finite:
        return MembershipResult(
            "inconclusive", None, state["branches"], reason="canonical branch only over an infinite ring"
        )
    return MembershipResult("refuted", None, state["branches"])
