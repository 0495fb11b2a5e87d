"""The deformation's special series, as certified truncated windows.

This module builds the degree-p^l isogeny polynomial psi with its
binomial-derived coefficients, the two-parameter deformed exponential
E(U, L; X) with its integrality certificate, the vector forms E(v, lam; X)
and the two-variable cocycle F(v, lam; X, Y), the shifted-power operator
behind G, and the x+y+lam*xy composition law.

Everything with p-power denominators in an exponent is computed once over
the universal symbolic ring and transported into concrete rings by
specialization of certified-integral coefficients; no target ring is
ever asked to divide by p.
"""

import threading

from .errors import (
    BinomialDivisibilityFailure,
    IntegralityFailure,
    RelationViolated,
    UnsupportedCtx,
    UnsupportedE,
)
from .rings.ctx import PLocalRing, SymbolicLaurentRing
from .rings.rat import Q, binom_int
from .series import TruncSeries, s_binom_pow, s_inv, s_subst
from .witt import comp_power, f_lambda, ghost, verschiebung, zero_extend

_memo = {}
_memo_lock = threading.Lock()


class DeformLaw:
    """The composition x.y = x + y + lam*x*y, as a series factory."""

    def __init__(self, lam):
        self.lam = lam

    def compose(self, f, g):
        """f + g + lam*f*g for two series over the law's ring."""
        return f + g + f * g * self.lam

    def xy(self, vars_, cap, xvar="X", yvar="Y"):
        ctx = self.lam.ctx
        x = TruncSeries.gen(ctx, vars_, cap, xvar)
        y = TruncSeries.gen(ctx, vars_, cap, yvar)
        return self.compose(x, y)

    def check_associativity(self, cap=6):
        ctx = self.lam.ctx
        vars_ = ("X", "Y", "Z")
        x = TruncSeries.gen(ctx, vars_, cap, "X")
        y = TruncSeries.gen(ctx, vars_, cap, "Y")
        z = TruncSeries.gen(ctx, vars_, cap, "Z")
        return self.compose(self.compose(x, y), z) == self.compose(x, self.compose(y, z))

    def inverse_series(self, cap):
        """The series i(X) with X . i(X) = 0 (exists since i(0) = 0)."""
        ctx = self.lam.ctx
        x = TruncSeries.gen(ctx, ("X",), cap, "X")
        # solve (1 + lam X) i = -X degree by degree via geometric inversion
        denom = TruncSeries.one(ctx, ("X",), cap) + x * self.lam
        return (-x) * s_inv(denom)


class PsiPoly:
    """psi(X) = sum alpha_i X^i + X^{p^l} with its construction data.

    Invariants checked at build time: the nu-relation at every k, the
    binomial divisibility behind each alpha_i, and the multiplied-out
    identity lam^{p^l} psi(X) = (1+lam X)^{p^l} - 1 (which follows from
    the relation with no zero-divisor caveat).
    """

    def __init__(self, p, l, lam, nu, alphas):
        self.p = p
        self.l = l
        self.lam = lam
        self.nu = list(nu)
        self.alphas = list(alphas)  # alpha_1 .. alpha_{p^l - 1}
        self.ctx = lam.ctx

    @property
    def degree(self):
        return self.p ** self.l

    def lam_power(self):
        """lam^{p^l}, the deformation parameter downstairs."""
        return self.lam ** self.degree

    def series(self, vars_, cap, var="X"):
        ctx = self.ctx
        coeffs = {}
        for i, a in enumerate(self.alphas, start=1):
            if not a.is_zero():
                coeffs[_mono(vars_, var, i)] = a
        coeffs[_mono(vars_, var, self.degree)] = ctx.one
        return TruncSeries(ctx, vars_, cap, coeffs)

    def min_degree(self):
        for i, a in enumerate(self.alphas, start=1):
            if not a.is_zero():
                return i
        return self.degree

    def __repr__(self):
        return f"psi(p={self.p}, l={self.l})"


def _mono(vars_, var, d):
    return tuple(d if v == var else 0 for v in vars_)


def psi_build(p, l, lam, nu):
    """Construct psi from (p, l, lam, nu_0..nu_{l-1}), checking everything."""
    ctx = lam.ctx
    if len(nu) != l:
        raise RelationViolated(len(nu), f"need exactly {l} nu values, got {len(nu)}")
    for k in range(l):
        lhs = lam ** (p ** k) * (p ** (l - k))
        rhs = nu[k] * lam ** (p ** l)
        if lhs != rhs:
            raise RelationViolated(k)
    alphas = []
    for i in range(1, p ** l):
        k_i = 0
        while p ** (k_i + 1) <= i:
            k_i += 1
        r_i = i - p ** k_i
        c = binom_int(p ** l, i)
        if c % (p ** (l - k_i)) != 0:
            raise BinomialDivisibilityFailure(i)
        alphas.append(lam ** r_i * nu[k_i] * (c // p ** (l - k_i)))
    psi = PsiPoly(p, l, lam, nu, alphas)

    # multiplied-out closed form; a failure here is an arithmetic bug
    cap = p ** l
    x = TruncSeries.gen(ctx, ("X",), cap, "X")
    lhs = psi.series(("X",), cap) * psi.lam_power()
    rhs = (TruncSeries.one(ctx, ("X",), cap) + x * lam) ** (p ** l) - TruncSeries.one(ctx, ("X",), cap)
    if lhs != rhs:
        raise IntegralityFailure("lam^{p^l} psi(X) != (1+lam X)^{p^l} - 1 despite the nu-relation")
    return psi


def psi_hom_check(psi, cap):
    """Exact check of psi(X.Y) = psi(X) + psi(Y) + lam^{p^l} psi(X) psi(Y).

    Returns (ok, first_mismatch_monomial_or_None).  Uses a window wide
    enough for the full identity, so no truncation loss occurs.
    """
    cap = max(cap, 2 * psi.degree)
    vars_ = ("X", "Y")
    law = DeformLaw(psi.lam)
    xy = law.xy(vars_, cap)
    psix = psi.series(vars_, cap, var="X")
    psiy = psi.series(vars_, cap, var="Y")
    psit = psi.series(("T",), cap, var="T")
    lhs = s_subst(psit, {"T": xy})
    rhs = psix + psiy + psix * psiy * psi.lam_power()
    diff = lhs - rhs
    if diff.is_zero():
        return True, None
    return False, min(diff.coeffs, key=lambda e: (sum(e), e))


class UniversalSeries:
    """A truncated series over the symbolic ring plus its integrality card."""

    def __init__(self, body, claimed_subring):
        self.body = body
        self.claimed_subring = tuple(claimed_subring)
        self.certificate = {}
        ctx = body.ctx
        for e, c in body.items_sorted():
            self.certificate[e] = bool(ctx.is_p_integral(c))

    @property
    def ok(self):
        return all(self.certificate.values())

    def failing_monomials(self):
        return [e for e, good in self.certificate.items() if not good]


def ep_universal(p, cap):
    """The two-parameter deformed exponential E(U, L; X) to degree `cap`.

    Computed over Q[U, L, L^-1] from the product form; every coefficient
    is certified to lie in Z_(p)[U, L].  Memoized per (p, cap).
    """
    key = ("ep", p, cap)
    with _memo_lock:
        if key in _memo:
            return _memo[key]
    ring = SymbolicLaurentRing(p, ("U", "L"), ("L",))
    u_over_l = ring.exact_div(ring.gen("U"), ring.gen("L"))
    one = TruncSeries.one(ring, ("X",), cap)
    x = TruncSeries.gen(ring, ("X",), cap, "X")
    body = s_binom_pow(one + x * ring.gen("L"), u_over_l)
    k = 1
    while p ** k <= cap:
        base = one + x.stretch(p ** k) * ring.gen("L") ** (p ** k)
        expo = ring.div_int(u_over_l ** (p ** k) - u_over_l ** (p ** (k - 1)), p ** k)
        body = body * s_binom_pow(base, expo)
        k += 1
    out = UniversalSeries(body, ("U", "L"))
    if not out.ok:
        raise IntegralityFailure(
            f"E(U,L;X) has non-integral coefficients at {out.failing_monomials()[:3]}"
        )
    with _memo_lock:
        _memo[key] = out
    return out


def _comp_or_zero(v, k):
    return v.comps[k] if k < len(v.comps) else v.ctx.zero


def ep_vec(v, lam, cap, vars_=("X",), var="X"):
    """E(v, lam; X) = prod_k E(v_k, lam^{p^k}; X^{p^k}) to degree `cap`.

    Components past the window (p^k > cap) cannot contribute and the
    vector is read as zero beyond its length.  Concrete rings receive the
    certified universal coefficients by specialization.
    """
    ctx = lam.ctx
    p = v.p
    out = TruncSeries.one(ctx, vars_, cap)
    k = 0
    while p ** k <= cap:
        vk = _comp_or_zero(v, k)
        if not vk.is_zero():
            sub_cap = cap // (p ** k)
            uni = ep_universal(p, sub_cap)
            bindings = {"U": vk, "L": lam ** (p ** k)}
            factor = {}
            for e, c in uni.body.items_sorted():
                d = e[0] * p ** k
                if d > cap:
                    continue
                img = uni.body.ctx.specialize(c, bindings, ctx)
                if not img.is_zero():
                    factor[_mono(vars_, var, d)] = img
            out = out * TruncSeries(ctx, vars_, cap, factor)
        k += 1
    return out


def ep_vec_exponent_form(v, lam, cap):
    """The alternative closed form of E(v, lam; X) with explicit exponents.

    Only valid over Q-containing rings with lam invertible; used to check
    consistency of the two product presentations.
    """
    ctx = lam.ctx
    if not isinstance(ctx, (PLocalRing, SymbolicLaurentRing)):
        raise UnsupportedCtx("exponent form needs Q in the coefficients")
    p = v.p
    one = TruncSeries.one(ctx, ("X",), cap)
    x = TruncSeries.gen(ctx, ("X",), cap, "X")
    out = s_binom_pow(one + x * lam, ctx.exact_div(_comp_or_zero(v, 0), lam))
    kmax = 0
    while p ** (kmax + 1) <= cap:
        kmax += 1
    w = f_lambda(lam, zero_extend(v, kmax + 2))
    g = ghost(w)
    k = 1
    while p ** k <= cap:
        c = ctx.exact_div(g[k - 1], lam ** (p ** k) * (p ** k))
        out = out * s_binom_pow(one + x.stretch(p ** k) * lam ** (p ** k), c)
        k += 1
    return out


def fp_universal(p, cap):
    """Universal F(v_0..v_{K-1}, L; X, Y) with its integrality certificate."""
    key = ("fp", p, cap)
    with _memo_lock:
        if key in _memo:
            return _memo[key]
    K = 0
    while p ** (K + 1) <= cap:
        K += 1
    syms = tuple(f"v{i}" for i in range(K)) + ("L",)
    ring = SymbolicLaurentRing(p, syms, ("L",))
    vars_ = ("X", "Y")
    one = TruncSeries.one(ring, vars_, cap)
    x = TruncSeries.gen(ring, vars_, cap, "X")
    y = TruncSeries.gen(ring, vars_, cap, "Y")
    lam = ring.gen("L")
    s = x + y + x * y * lam
    vsyms = [ring.gen(f"v{i}") for i in range(K)]
    body = one
    for k in range(1, K + 1):
        lk = lam ** (p ** k)
        num = (one + (x ** (p ** k)) * lk) * (one + (y ** (p ** k)) * lk)
        den = one + (s ** (p ** k)) * lk
        base = num * s_inv(den)
        phi = _phantom(p, k - 1, vsyms, ring)
        expo = ring.exact_div(phi, lam ** (p ** k) * (p ** k))
        body = body * s_binom_pow(base, expo)
    out = UniversalSeries(body, syms)
    if not out.ok:
        raise IntegralityFailure(
            f"F(v,L;X,Y) has non-integral coefficients at {out.failing_monomials()[:3]}"
        )
    with _memo_lock:
        _memo[key] = out
    return out


def _phantom(p, n, comps, ctx):
    acc = comps[0] ** (p ** n)
    for i in range(1, n + 1):
        acc = acc + comps[i] ** (p ** (n - i)) * (p ** i)
    return acc


def fp_vec(v, lam, cap):
    """F(v, lam; X, Y): symmetric, constant term 1, integral by transport."""
    ctx = lam.ctx
    p = v.p
    uni = fp_universal(p, cap)
    K = len(uni.claimed_subring) - 1
    bindings = {"L": lam}
    for i in range(K):
        bindings[f"v{i}"] = _comp_or_zero(v, i)
    from .series import specialize_series

    return specialize_series(uni.body, bindings, ctx)


def ptilde(k, u, lam, cap, vars_=("X",), var="X"):
    """E applied to V^k(u^{(p^k)}): the k-fold shifted-power operator."""
    if k < 0:
        raise ValueError("ptilde needs k >= 0")
    w = comp_power(u, k)
    for _ in range(k):
        w = verschiebung(w)
    return ep_vec(w, lam, cap, vars_=vars_, var=var)


def gp(v, mu, ep_series, lam_inner, u_inner, cap, arg=None):
    """G(v, mu; E) for E = E(u_inner, lam_inner; -) composed with `arg`.

    The shifted-power operator needs E's underlying vector, so the caller
    must present u_inner and lam_inner; the series is recomputed and
    compared against `ep_series` (UnsupportedE on mismatch).  Q-containing
    coefficient rings only; concrete rings take the specialized result.
    """
    ctx = mu.ctx
    if not isinstance(ctx, (PLocalRing, SymbolicLaurentRing)):
        raise UnsupportedCtx("G is computed universally; specialize its output instead")
    if u_inner is None or lam_inner is None:
        raise UnsupportedE("E must come with its underlying vector and parameter")
    p = v.p
    vars_ = ep_series.vars

    def compose(f):
        if arg is None:
            return f.map_vars(vars_, rename={"T": vars_[0]})
        return s_subst(f, {"T": arg})

    expected = compose(ep_vec(u_inner, lam_inner, cap, vars_=("T",), var="T"))
    if expected != ep_series:
        raise UnsupportedE("presented series is not E(u_inner, lam_inner; arg)")
    if ep_series.constant_term() != ctx.one:
        raise UnsupportedE("E must have constant term 1")

    one = TruncSeries.one(ctx, vars_, cap)
    h = ep_series - one
    K = 0
    while p ** (K + 1) <= cap:
        K += 1
    g = ghost(zero_extend(v, max(K, 1)))
    out = one
    for k in range(1, K + 1):
        num = one + h ** (p ** k)
        den = compose(ptilde(k, u_inner, lam_inner, cap, vars_=("T",), var="T"))
        base = num * s_inv(den)
        expo = ctx.exact_div(g[k - 1], mu ** (p ** k) * (p ** k))
        out = out * s_binom_pow(base, expo)
    # the first dropped factor must be invisible inside the window
    kd = K + 1
    num = one + h ** (p ** kd)
    den = compose(ptilde(kd, u_inner, lam_inner, cap, vars_=("T",), var="T"))
    if num != one or den != one:
        raise IntegralityFailure("dropped G factor is visible inside the window")
    return out
