"""Truncated p-typical Witt vectors over an exact coefficient ring.

Length bookkeeping follows the truncation semantics used throughout the
package: frobenius and f_lambda map length m to m-1, verschiebung maps m
to m+1, and t_map preserves length by truncating its V^n sum.  Ring
operations evaluate the cached universal polynomial tables; nothing here
ever divides in the coefficient ring.
"""

from ..errors import (
    CtxMismatch,
    LengthMismatch,
    LengthTooShort,
    NoSuchA,
    NotInvertible,
    ScenarioInvalid,
    UnsupportedCtx,
)
from . import optables


class WittVec:
    __slots__ = ("p", "ctx", "comps")

    def __init__(self, p, ctx, comps):
        self.p = p
        self.ctx = ctx
        self.comps = tuple(c if not isinstance(c, int) else ctx.from_int(c) for c in comps)
        if not self.comps:
            raise LengthMismatch("Witt vectors have length >= 1")
        for c in self.comps:
            if c.ctx != ctx:
                raise CtxMismatch("components must share one ring context")

    def __len__(self):
        return len(self.comps)

    def __eq__(self, other):
        if not isinstance(other, WittVec):
            return NotImplemented
        return self.p == other.p and self.ctx == other.ctx and self.comps == other.comps

    def __hash__(self):
        return hash((self.p, self.comps))

    def __repr__(self):
        return "(" + ", ".join(repr(c) for c in self.comps) + ")"

    def __add__(self, other):
        return witt_add(self, other)

    def __sub__(self, other):
        return witt_sub(self, other)

    def __neg__(self):
        return witt_neg(self)

    def __mul__(self, other):
        return witt_mul(self, other)

    def is_zero(self):
        return all(c.is_zero() for c in self.comps)


def zero(p, ctx, m):
    return WittVec(p, ctx, [ctx.zero] * m)


def teichmuller(p, lam, m):
    """[lam] = (lam, 0, ..., 0)."""
    return WittVec(p, lam.ctx, [lam] + [lam.ctx.zero] * (m - 1))


def _check_pair(x, y):
    if x.p != y.p:
        raise CtxMismatch(f"prime mismatch: {x.p} vs {y.p}")
    if x.ctx != y.ctx:
        raise CtxMismatch("coefficient rings differ")
    if len(x) != len(y):
        raise LengthMismatch(f"lengths differ: {len(x)} vs {len(y)}")


def _eval_table(op, p, m, ctx, values):
    table = optables.get_table(p, m, op)
    return [optables.eval_int_poly(poly, values, ctx.from_int) for poly in table.polys]


def witt_add(x, y):
    _check_pair(x, y)
    comps = _eval_table("sum", x.p, len(x), x.ctx, list(x.comps) + list(y.comps))
    return WittVec(x.p, x.ctx, comps)


def witt_mul(x, y):
    _check_pair(x, y)
    comps = _eval_table("prod", x.p, len(x), x.ctx, list(x.comps) + list(y.comps))
    return WittVec(x.p, x.ctx, comps)


def witt_neg(x):
    comps = _eval_table("neg", x.p, len(x), x.ctx, list(x.comps))
    return WittVec(x.p, x.ctx, comps)


def witt_sub(x, y):
    return witt_add(x, witt_neg(y))


def scalar_int(n, w):
    """n.w in the Witt ring (n-fold sum), for any integer n."""
    if n < 0:
        return witt_neg(scalar_int(-n, w))
    acc = zero(w.p, w.ctx, len(w))
    base = w
    while n:
        if n & 1:
            acc = witt_add(acc, base)
        if n > 1:
            base = witt_add(base, base)
        n >>= 1
    return acc


def ghost(w):
    """Phantom components (Phi_0, ..., Phi_{m-1})."""
    p = w.p
    pk = list(w.comps)
    entries = []
    for n in range(len(w)):
        if n > 0:
            for i in range(n):
                pk[i] = pk[i] ** p
        acc = pk[0]
        for i in range(1, n + 1):
            acc = acc + pk[i] * (p ** i)
        entries.append(acc)
    return tuple(entries)


def frobenius(w):
    if len(w) < 2:
        raise LengthTooShort("frobenius needs length >= 2")
    comps = _eval_table("frobenius", w.p, len(w), w.ctx, list(w.comps))
    return WittVec(w.p, w.ctx, comps)


def verschiebung(w):
    return WittVec(w.p, w.ctx, (w.ctx.zero,) + w.comps)


def truncate(w, m):
    if m > len(w):
        raise LengthMismatch(f"cannot truncate length {len(w)} to {m}")
    return WittVec(w.p, w.ctx, w.comps[:m])


def zero_extend(w, m):
    if m < len(w):
        return truncate(w, m)
    return WittVec(w.p, w.ctx, w.comps + (w.ctx.zero,) * (m - len(w)))


def teich_scale(a, w):
    """[a].w, componentwise a^{p^n} w_n."""
    p = w.p
    out = []
    an = a.ctx.one
    for n, c in enumerate(w.comps):
        an = a if n == 0 else an ** p
        out.append(an * c)
    return WittVec(p, w.ctx, out)


def f_lambda(lam, w):
    """F^(lam) = F - [lam^{p-1}]. applied at length m, yielding length m-1."""
    if len(w) < 2:
        raise LengthTooShort("f_lambda needs length >= 2")
    return witt_sub(frobenius(w), teich_scale(lam ** (w.p - 1), truncate(w, len(w) - 1)))


def comp_power(w, k):
    """Componentwise p^k-th powers."""
    if k < 0:
        raise ValueError("comp_power needs k >= 0")
    q = w.p ** k
    return WittVec(w.p, w.ctx, [c ** q for c in w.comps])


def t_map(a, w):
    """T_a(w) = sum_n V^n([a_n].w), truncated to the length of w."""
    if a.ctx != w.ctx:
        raise CtxMismatch("t_map operands share one ring")
    if a.p != w.p:
        raise CtxMismatch("t_map operands share one prime")
    m = len(w)
    a = zero_extend(a, m)
    acc = zero(w.p, w.ctx, m)
    for n in range(m):
        scaled = teich_scale(a.comps[n], truncate(w, m - n))
        shifted = scaled
        for _ in range(n):
            shifted = verschiebung(shifted)
        acc = witt_add(acc, shifted)
    return acc


def make_a(p, lam, l, m, nu0=None):
    """A vector a with T_a([lam^{p^l}]) = p^l [lam], componentwise exact.

    Prefers the closed form p^l[lam] / lam^{p^l} when lam is invertible;
    finite rings are searched deterministically instead.  When nu0 is
    given the first component is pinned to it (the nu_0 = a_0 convention).
    """
    ctx = lam.ctx
    mu = lam ** (p ** l)
    b = scalar_int(p ** l, teichmuller(p, lam, m))

    if mu.is_zero():
        if not b.is_zero():
            raise NoSuchA("lam^{p^l} = 0 but p^l[lam] != 0")
        first = nu0 if nu0 is not None else ctx.zero
        a = WittVec(p, ctx, [first] + [ctx.zero] * (m - 1))
    elif ctx.is_finite():
        comps = []
        for i, target in enumerate(b.comps):
            if i == 0 and nu0 is not None:
                if mu * nu0 != target:
                    raise ScenarioInvalid("pinned nu_0 violates lam^{p^l} a_0 = (p^l[lam])_0")
                comps.append(nu0)
                continue
            sol = next((x for x in ctx.elements() if mu * x == target), None)
            if sol is None:
                raise NoSuchA(f"no component solves lam^(p^l) * a_{i} = (p^l[lam])_{i}")
            comps.append(sol)
        a = WittVec(p, ctx, comps)
    else:
        try:
            comps = [ctx.exact_div(c, mu) for c in b.comps]
        except (NotInvertible, UnsupportedCtx) as exc:
            raise NotInvertible("lam is not invertible and the ring is not searchable") from exc
        try:
            # laurent exponents on inverted symbols are fine; coefficient
            # p-integrality is the condition for a to live in W(A)
            if not all(ctx.p_val(c) >= 0 for c in comps):
                raise NoSuchA("closed-form a has non-p-integral components")
        except UnsupportedCtx:
            pass
        a = WittVec(p, ctx, comps)

    if nu0 is not None and a.comps[0] != nu0:
        if mu * nu0 == b.comps[0]:
            a = WittVec(p, ctx, (nu0,) + a.comps[1:])
        else:
            raise ScenarioInvalid("nu_0 is inconsistent with T_a([lam^{p^l}]) = p^l[lam]")

    # dual-route check: the t-map machinery must reproduce b exactly
    if t_map(a, teichmuller(p, mu, m)) != b:
        raise NoSuchA("candidate a fails T_a([lam^{p^l}]) = p^l[lam]")
    for i in range(m):
        if mu * a.comps[i] != b.comps[i]:
            raise NoSuchA("candidate a fails the componentwise law")
    return a
