"""Truncated multivariate formal power series with exact coefficients.

A TruncSeries holds {exponent_tuple: RingElem} over an ordered subset of
the variables (T, X, Y, Z) with a total-degree cap D: monomials of degree
above D are unrepresented, and every operation truncates there.  Equality
requires equal caps; comparing windows of different widths is a bug in
the caller, not a coercion opportunity.

Division by integers (binomial powers, exp, log) is only available over
the Q-containing coefficient rings; integral results over Z/(p^n) and
friends are always produced upstream by specializing a certified
universal series, never by dividing in the target ring.
"""

from .errors import (
    AmbiguousSolution,
    BudgetExceeded,
    CapMismatch,
    CtxMismatch,
    MalformedSpec,
    NonInvertibleFactorial,
    NonUnitBase,
    NonUnitConstantTerm,
    NonzeroConstantTerm,
    NotAUnit,
    UnboundSymbol,
    Unsolvable,
    UnsupportedCtx,
)
from .linalg import linear_solutions
from .rings.ctx import PLocalRing, SymbolicLaurentRing
from .rings.parse import eval_ast, parse_ast

VAR_ORDER = ("T", "X", "Y", "Z")


def _check_vars(vars_):
    vars_ = tuple(vars_)
    if any(v not in VAR_ORDER for v in vars_):
        raise MalformedSpec(f"series variables must come from {VAR_ORDER}")
    if tuple(sorted(vars_, key=VAR_ORDER.index)) != vars_:
        raise MalformedSpec("series variables must be in canonical order T < X < Y < Z")
    if len(set(vars_)) != len(vars_):
        raise MalformedSpec("duplicate series variable")
    return vars_


class TruncSeries:
    __slots__ = ("ctx", "vars", "cap", "coeffs")

    def __init__(self, ctx, vars_, cap, coeffs=None):
        self.ctx = ctx
        self.vars = _check_vars(vars_)
        self.cap = cap
        clean = {}
        if coeffs:
            for e, c in coeffs.items():
                if sum(e) > cap or c.is_zero():
                    continue
                clean[tuple(e)] = c
        self.coeffs = clean

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, ctx, vars_, cap):
        return cls(ctx, vars_, cap)

    @classmethod
    def const(cls, ctx, vars_, cap, value):
        if isinstance(value, int):
            value = ctx.from_int(value)
        return cls(ctx, vars_, cap, {(0,) * len(tuple(vars_)): value})

    @classmethod
    def one(cls, ctx, vars_, cap):
        return cls.const(ctx, vars_, cap, ctx.one)

    @classmethod
    def gen(cls, ctx, vars_, cap, name):
        vars_ = tuple(vars_)
        if name not in vars_:
            raise MalformedSpec(f"{name} is not among the series variables {vars_}")
        e = tuple(1 if v == name else 0 for v in vars_)
        return cls(ctx, vars_, cap, {e: ctx.one})

    # -- basics ----------------------------------------------------------

    def _check(self, other):
        if self.ctx != other.ctx:
            raise CtxMismatch("series coefficient rings differ")
        if self.vars != other.vars:
            raise CapMismatch(f"variable sets differ: {self.vars} vs {other.vars}")
        if self.cap != other.cap:
            raise CapMismatch(f"caps differ: {self.cap} vs {other.cap}")

    def coefficient(self, e):
        return self.coeffs.get(tuple(e), self.ctx.zero)

    def constant_term(self):
        return self.coefficient((0,) * len(self.vars))

    def is_zero(self):
        return not self.coeffs

    def min_degree(self):
        """Lowest total degree of a stored monomial; cap+1 when zero."""
        if not self.coeffs:
            return self.cap + 1
        return min(sum(e) for e in self.coeffs)

    def truncate(self, cap):
        if cap > self.cap:
            raise CapMismatch("cannot widen a truncated window")
        return TruncSeries(self.ctx, self.vars, cap, self.coeffs)

    def stretch(self, k):
        """Substitute v -> v^k for every variable (exponent scaling)."""
        if k < 1:
            raise ValueError("stretch factor must be >= 1")
        return TruncSeries(
            self.ctx, self.vars, self.cap, {tuple(k * x for x in e): c for e, c in self.coeffs.items()}
        )

    def map_vars(self, target_vars, rename=None):
        """Move the series into another variable tuple, optionally renaming."""
        rename = rename or {}
        target_vars = tuple(target_vars)
        positions = []
        for v in self.vars:
            nv = rename.get(v, v)
            if nv not in target_vars:
                raise MalformedSpec(f"target variables {target_vars} lack {nv}")
            positions.append(target_vars.index(nv))
        out = {}
        for e, c in self.coeffs.items():
            ne = [0] * len(target_vars)
            for pos, ei in zip(positions, e):
                ne[pos] = ei
            out[tuple(ne)] = c
        return TruncSeries(self.ctx, target_vars, self.cap, out)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = TruncSeries.const(self.ctx, self.vars, self.cap, other)
        self._check(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(e, None)
            else:
                out[e] = s
        return TruncSeries(self.ctx, self.vars, self.cap, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries(self.ctx, self.vars, self.cap, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = TruncSeries.const(self.ctx, self.vars, self.cap, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.ctx.from_int(other)
        if not isinstance(other, TruncSeries):
            # scalar (RingElem)
            return TruncSeries(self.ctx, self.vars, self.cap, {e: c * other for e, c in self.coeffs.items()})
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) > len(b):
            a, b = b, a
        cap = self.cap
        out = {}
        b_by_deg = sorted(b.items(), key=lambda ec: sum(ec[0]))
        for e1, c1 in a.items():
            d1 = sum(e1)
            for e2, c2 in b_by_deg:
                if d1 + sum(e2) > cap:
                    break
                key = tuple(x + y for x, y in zip(e1, e2))
                prod = c1 * c2
                s = out.get(key)
                s = prod if s is None else s + prod
                if s.is_zero():
                    out.pop(key, None)
                else:
                    out[key] = s
        return TruncSeries(self.ctx, self.vars, self.cap, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("series powers take n >= 0; use s_inv")
        result = TruncSeries.one(self.ctx, self.vars, self.cap)
        base = self
        while n:
            if n & 1:
                result = result * base
            if n > 1:
                base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if self.ctx != other.ctx or self.vars != other.vars or self.cap != other.cap:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.vars, self.cap, frozenset(self.coeffs.items())))

    def items_sorted(self):
        return sorted(self.coeffs.items(), key=lambda ec: (sum(ec[0]), ec[0]))

    def __repr__(self):
        return to_literal(self)


def monomials_upto(nvars, cap):
    """All exponent tuples of total degree <= cap, graded order."""
    if nvars == 0:
        yield ()
        return
    for d in range(cap + 1):
        yield from _monomials_of_degree(nvars, d)


def _monomials_of_degree(nvars, d):
    if nvars == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _monomials_of_degree(nvars - 1, d - first):
            yield (first,) + rest


def s_inv(f):
    """Multiplicative inverse up to the cap; the constant term must be a unit."""
    c0 = f.constant_term()
    try:
        c0inv = f.ctx.inv(c0)
    except NotAUnit as exc:
        raise NonUnitConstantTerm(f"constant term {c0!r} is not a unit") from exc
    tail = sorted(((e, c) for e, c in f.coeffs.items() if sum(e) > 0), key=lambda ec: sum(ec[0]))
    out = {(0,) * len(f.vars): c0inv}
    for mono in monomials_upto(len(f.vars), f.cap):
        d = sum(mono)
        if d == 0:
            continue
        acc = f.ctx.zero
        for e, c in tail:
            if sum(e) > d:
                break
            rest = tuple(m - x for m, x in zip(mono, e))
            if any(r < 0 for r in rest):
                continue
            g = out.get(rest)
            if g is not None:
                acc = acc + c * g
        val = -(c0inv * acc)
        if not val.is_zero():
            out[mono] = val
    g = TruncSeries(f.ctx, f.vars, f.cap, out)
    return g


def s_subst(f, mapping):
    """Composite f(g_1, ..., g_k); every g must have zero constant term."""
    some = next(iter(mapping.values()))
    for g in mapping.values():
        some._check(g)
        if not g.constant_term().is_zero():
            raise NonzeroConstantTerm("substituted series must vanish at 0")
    ctx, tvars, cap = some.ctx, some.vars, some.cap
    if ctx != f.ctx:
        raise CtxMismatch("substitution across coefficient rings")
    used = [v for i, v in enumerate(f.vars) if any(e[i] for e in f.coeffs)]
    for v in used:
        if v not in mapping:
            raise UnboundSymbol(f"series variable {v} has no substitute")
    pow_cache = {v: {0: TruncSeries.one(ctx, tvars, cap)} for v in f.vars}

    def var_power(v, n):
        cache = pow_cache[v]
        if n not in cache:
            best = max(k for k in cache if k <= n)
            acc = cache[best]
            for k in range(best + 1, n + 1):
                acc = acc * mapping[v]
                cache[k] = acc
        return cache[n]

    out = TruncSeries.zero(ctx, tvars, cap)
    for e, c in f.items_sorted():
        term = TruncSeries.const(ctx, tvars, cap, c)
        for i, ei in enumerate(e):
            if ei:
                term = term * var_power(f.vars[i], ei)
                if term.is_zero():
                    break
        out = out + term
    return out


def _require_q_ctx(ctx, error):
    if not isinstance(ctx, (PLocalRing, SymbolicLaurentRing)):
        raise error


def s_binom_pow(f, c):
    """f^c = sum binom(c, n) (f-1)^n for a ring-element exponent c.

    Needs division by 1..cap, so the coefficient ring must contain Q.
    For integer c this agrees with repeated multiplication.
    """
    _require_q_ctx(f.ctx, NonInvertibleFactorial(f"binomial powers need Q in the coefficients, not {f.ctx}"))
    if isinstance(c, int):
        c = f.ctx.from_int(c)
    if f.constant_term() != f.ctx.one:
        raise NonUnitBase("binomial powers need constant term exactly 1")
    h = f - TruncSeries.one(f.ctx, f.vars, f.cap)
    acc = TruncSeries.one(f.ctx, f.vars, f.cap)
    term = TruncSeries.one(f.ctx, f.vars, f.cap)
    binom = f.ctx.one
    for n in range(1, f.cap + 1):
        binom = f.ctx.div_int(binom * (c - (n - 1)), n)
        term = term * h
        if term.is_zero():
            break
        acc = acc + term * binom
    return acc


def s_exp(f):
    """exp(f) for f with zero constant term, over a Q-containing ring."""
    _require_q_ctx(f.ctx, UnsupportedCtx(f"s_exp needs Q in the coefficients, not {f.ctx}"))
    if not f.constant_term().is_zero():
        raise NonzeroConstantTerm("exp needs a zero constant term")
    acc = TruncSeries.one(f.ctx, f.vars, f.cap)
    term = TruncSeries.one(f.ctx, f.vars, f.cap)
    for n in range(1, f.cap + 1):
        term = _scale_div_int(term * f, n)  # f^n / n!, built incrementally
        if term.is_zero():
            break
        acc = acc + term
    return acc


def _scale_div_int(f, n):
    return TruncSeries(f.ctx, f.vars, f.cap, {e: f.ctx.div_int(c, n) for e, c in f.coeffs.items()})


def s_log(f):
    """log(f) for f with constant term 1, over a Q-containing ring."""
    _require_q_ctx(f.ctx, UnsupportedCtx(f"s_log needs Q in the coefficients, not {f.ctx}"))
    if f.constant_term() != f.ctx.one:
        raise NonUnitConstantTerm("log needs constant term exactly 1")
    h = f - TruncSeries.one(f.ctx, f.vars, f.cap)
    acc = TruncSeries.zero(f.ctx, f.vars, f.cap)
    term = TruncSeries.one(f.ctx, f.vars, f.cap)
    sign = 1
    for n in range(1, f.cap + 1):
        term = term * h
        if term.is_zero():
            break
        acc = acc + _scale_div_int(term, sign * n)
        sign = -sign
    return acc


def psi_adic_expand(g, psi, kmax, budget=100000):
    """Coefficients d_0..d_kmax with g = sum d_k psi^k up to the cap.

    psi must vanish at 0.  The solve is triangular on the pivot rows
    k*min_degree(psi); non-unit pivots over finite rings branch over all
    solutions within `budget`.  Raises Unsolvable when no expansion
    matches every monomial up to the cap, AmbiguousSolution (carrying all
    of them) when several do.
    """
    if len(g.vars) != 1 or g.vars != psi.vars:
        raise MalformedSpec("psi-adic expansion works on univariate series over one variable")
    g._check(psi)
    if not psi.constant_term().is_zero():
        raise NonzeroConstantTerm("psi must vanish at 0")
    if psi.is_zero():
        raise MalformedSpec("psi must be nonzero")
    ctx, cap = g.ctx, g.cap
    d0 = psi.min_degree()
    lead = psi.coefficient((d0,))
    powers = [TruncSeries.one(ctx, g.vars, cap)]
    for _ in range(kmax):
        powers.append(powers[-1] * psi)

    solutions = []
    explored = 0

    def descend(k, chosen, residual):
        nonlocal explored
        explored += 1
        if explored > budget:
            raise BudgetExceeded(f"psi-adic branch budget {budget} exhausted")
        if k > kmax:
            if residual.is_zero():
                solutions.append(tuple(chosen))
            return
        pivot_deg = k * d0
        if pivot_deg > cap:
            # no information left in the window: remaining d_k must keep
            # the residual zero; only d_k = 0 is canonical, but any value
            # works within the cap, so stop here and accept zeros.
            if residual.is_zero():
                solutions.append(tuple(chosen + [ctx.zero] * (kmax + 1 - k)))
            return
        a = lead ** k
        r = residual.coefficient((pivot_deg,))
        for dk in linear_solutions(ctx, a, r, limit=None):
            descend(k + 1, chosen + [dk], residual - powers[k] * dk)

    descend(0, [], g)
    unique = []
    for sol in solutions:
        if sol not in unique:
            unique.append(sol)
    if not unique:
        raise Unsolvable("series is not in the psi-adic subring at this precision")
    if len(unique) > 1:
        raise AmbiguousSolution(unique)
    return list(unique[0])


def specialize_series(f, bindings, target):
    """Map a series coefficientwise through ctx.specialize into `target`."""
    out = {}
    for e, c in f.coeffs.items():
        img = f.ctx.specialize(c, bindings, target)
        if not img.is_zero():
            out[e] = img
    return TruncSeries(target, f.vars, f.cap, out)


# -- literal format --------------------------------------------------------


def _needs_parens(text):
    return any(ch in text for ch in "+- ") and not (text.startswith("(") and text.endswith(")"))


def to_literal(f):
    """Canonical exact text form: terms in graded monomial order."""
    if not f.coeffs:
        return "0"
    parts = []
    for e, c in f.items_sorted():
        cs = f.ctx.format_elem(c)
        if _needs_parens(cs):
            cs = f"({cs})"
        factors = []
        for v, ei in zip(f.vars, e):
            if ei == 0:
                continue
            factors.append(v if ei == 1 else f"{v}^{ei}")
        if not factors:
            parts.append(cs)
        elif cs == "1":
            parts.append("*".join(factors))
        else:
            parts.append(cs + "*" + "*".join(factors))
    return " + ".join(parts)


def from_literal(ctx, vars_, cap, text):
    """Parse the literal format back into a TruncSeries (exact round-trip)."""
    vars_ = _check_vars(vars_)

    def from_int(n):
        return TruncSeries.const(ctx, vars_, cap, n)

    def sym(name):
        if name in vars_:
            return TruncSeries.gen(ctx, vars_, cap, name)
        # ring-level symbol (laurent generator or quotient variable)
        from .rings.parse import parse_elem

        return TruncSeries.const(ctx, vars_, cap, parse_elem(ctx, name))

    def inv(x):
        if not all(sum(e) == 0 for e in x.coeffs):
            return s_inv(x)
        from .errors import NotIntegral

        c = x.constant_term()
        try:
            return TruncSeries.const(ctx, vars_, cap, ctx.exact_div(ctx.one, c))
        except (UnsupportedCtx, NotIntegral):
            return TruncSeries.const(ctx, vars_, cap, ctx.inv(c))

    return eval_ast(parse_ast(text), from_int, sym, inv)
