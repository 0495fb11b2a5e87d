"""Exact commutative coefficient rings with decidable equality.

Five ring kinds are provided, each with canonical-form payloads:

  IntegerRing          int
  PLocalRing(p)        Q (exact rational; the p is the locality tag)
  ModRing(m)           int in [0, m)
  PolyQuotientRing     tuple of base payloads, length deg(modulus);
                       modulus is monic of degree >= 1
  SymbolicLaurentRing  QPoly over named generators; negative exponents
                       only on the designated laurent symbols

PLocalRing and SymbolicLaurentRing deliberately store full rational
coefficients: membership in the p-local subring is a *certificate*
(is_p_integral), not a representation invariant, so that valuations of
non-integral intermediates (for instance 3/4 at p=2) remain computable.

Unit certification is p-local where the ring has a p: an element of
PLocalRing or of a PolyQuotientRing over it counts as a unit only when
both it and its exact field inverse are p-integral.  Elements and
contexts are immutable after construction.
"""

import itertools
import math
import random

from ..errors import (
    CtxMismatch,
    MalformedSpec,
    NotAUnit,
    NotIntegral,
    NotInvertible,
    UnboundSymbol,
    UnsupportedCtx,
)
from .qpoly import QPoly
from .rat import Q, QONE, q_is_integer, q_str, qden, qnum, qval


class SamplePolicy:
    """Bounds for sampling from rings without finite enumeration."""

    def __init__(self, int_bound=None, degree=2, terms=3, coeff_bound=9):
        self.int_bound = int_bound
        self.degree = degree
        self.terms = terms
        self.coeff_bound = coeff_bound


class RingElem:
    __slots__ = ("ctx", "payload")

    def __init__(self, ctx, payload):
        self.ctx = ctx
        self.payload = payload

    def _coerce(self, other):
        if isinstance(other, RingElem):
            if other.ctx != self.ctx:
                raise CtxMismatch(f"{self.ctx} vs {other.ctx}")
            return other
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RingElem(self.ctx, self.ctx._add(self.payload, other.payload))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RingElem(self.ctx, self.ctx._add(self.payload, self.ctx._neg(other.payload)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RingElem(self.ctx, self.ctx._mul(self.payload, other.payload))

    __rmul__ = __mul__

    def __neg__(self):
        return RingElem(self.ctx, self.ctx._neg(self.payload))

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("RingElem powers take integer exponents >= 0; use ctx.inv for inverses")
        result = self.ctx.one
        base = self
        while n:
            if n & 1:
                result = result * base
            if n > 1:
                base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ctx.from_int(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.ctx == other.ctx and self.payload == other.payload

    def __hash__(self):
        return hash((self.ctx, self.payload))

    def is_zero(self):
        return self.ctx._is_zero(self.payload)

    def __repr__(self):
        return self.ctx.format_elem(self)


class RingCtx:
    kind = "?"
    prime_p = None

    def el(self, payload):
        return RingElem(self, self._canon(payload))

    def from_int(self, n):
        raise NotImplementedError

    @property
    def zero(self):
        return self.from_int(0)

    @property
    def one(self):
        return self.from_int(1)

    # payload-level hooks
    def _canon(self, payload):
        return payload

    def _is_zero(self, payload):
        return payload == self.from_int(0).payload

    def _add(self, a, b):
        raise NotImplementedError

    def _mul(self, a, b):
        raise NotImplementedError

    def _neg(self, a):
        raise NotImplementedError

    # unit / division surface
    def inv(self, x):
        raise NotAUnit(f"no inversion over {self.kind}")

    def is_unit(self, x):
        try:
            self.inv(x)
            return True
        except NotAUnit:
            return False

    def inv_int(self, d):
        """Inverse of the image of the integer d; NotIntegral when absent."""
        try:
            return self.inv(self.from_int(d))
        except NotAUnit as exc:
            raise NotIntegral(f"denominator {d} is not invertible in {self}") from exc

    def exact_div(self, x, y):
        """x / y whenever a (p-integral where applicable) quotient exists."""
        raise UnsupportedCtx(f"exact_div over {self.kind}")

    def div_int(self, x, n):
        """x / n for an integer n; only rings containing Q support this."""
        raise UnsupportedCtx(f"div_int over {self.kind}")

    # p-locality
    def p_val(self, x):
        raise UnsupportedCtx(f"p_val over {self.kind}")

    def is_p_integral(self, x):
        raise UnsupportedCtx(f"is_p_integral over {self.kind}")

    # morphisms
    def specialize(self, x, bindings, target):
        raise UnsupportedCtx(f"specialize from {self.kind}")

    # finiteness
    def is_finite(self):
        return False

    def size(self):
        raise UnsupportedCtx(f"{self.kind} is not finite")

    def elements(self):
        raise UnsupportedCtx(f"{self.kind} is not enumerable")

    def element_at(self, idx):
        raise UnsupportedCtx(f"{self.kind} is not enumerable")

    def is_zero_divisor(self, x):
        if not self.is_finite():
            return False  # all infinite kinds here are domains
        if x.is_zero():
            return False
        return any((not y.is_zero()) and (x * y).is_zero() for y in self.elements())

    def nilpotency_index(self, x, bound):
        """Least k <= bound with x^k = 0, else None."""
        if bound < 1:
            raise ValueError("bound must be >= 1")
        power = x
        for k in range(1, bound + 1):
            if power.is_zero():
                return k
            if k < bound:
                power = power * x
        return None

    def sample(self, seed, policy=None):
        if self.is_finite():
            return self.element_at(seed % self.size())
        return self._sample_unbounded(seed, policy)

    def _sample_unbounded(self, seed, policy):
        raise UnsupportedCtx(f"sampling from {self.kind} needs a policy")

    def format_elem(self, x):
        return str(x.payload)

    def describe(self):
        return self.kind


def _q_image(q, target):
    num, den = qnum(q), qden(q)
    if isinstance(target, (PLocalRing, SymbolicLaurentRing)):
        if isinstance(target, SymbolicLaurentRing):
            return target.from_q(q)
        return target.el(q)
    img = target.from_int(num)
    if den != 1:
        img = img * target.inv_int(den)
    return img


class IntegerRing(RingCtx):
    kind = "int"

    def __init__(self, prime_p=None):
        self.prime_p = prime_p

    def from_int(self, n):
        return RingElem(self, int(n))

    def _add(self, a, b):
        return a + b

    def _mul(self, a, b):
        return a * b

    def _neg(self, a):
        return -a

    def _is_zero(self, a):
        return a == 0

    def inv(self, x):
        if x.payload in (1, -1):
            return x
        raise NotAUnit(f"{x.payload} is not a unit of the integers", witness=abs(x.payload))

    def exact_div(self, x, y):
        if y.payload == 0 or x.payload % y.payload:
            raise NotIntegral(f"{x.payload} not divisible by {y.payload}")
        return self.from_int(x.payload // y.payload)

    def specialize(self, x, bindings, target):
        return target.from_int(x.payload)

    def _sample_unbounded(self, seed, policy):
        if policy is None or policy.int_bound is None:
            raise UnsupportedCtx("integer sampling needs a policy with int_bound")
        rng = random.Random(seed)
        return self.from_int(rng.randint(-policy.int_bound, policy.int_bound))

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash(("int",))

    def __repr__(self):
        return "Z"


class PLocalRing(RingCtx):
    """Exact rationals tagged with a prime for p-locality certificates."""

    kind = "plocal"

    def __init__(self, p):
        if p < 2 or any(p % q == 0 for q in range(2, int(math.isqrt(p)) + 1)):
            raise MalformedSpec(f"plocal prime must be prime, got {p}")
        self.prime_p = p

    def from_int(self, n):
        return RingElem(self, Q(n))

    def el(self, payload):
        return RingElem(self, Q(payload))

    def _add(self, a, b):
        return a + b

    def _mul(self, a, b):
        return a * b

    def _neg(self, a):
        return -a

    def _is_zero(self, a):
        return a == 0

    def inv(self, x):
        v = self.p_val(x)
        if v != 0:
            raise NotAUnit(f"{q_str(x.payload)} has {self.prime_p}-adic valuation {v}", witness=v)
        return RingElem(self, QONE / x.payload)

    def exact_div(self, x, y):
        if y.payload == 0:
            raise NotInvertible("division by zero")
        q = x.payload / y.payload
        return RingElem(self, q)

    def div_int(self, x, n):
        return RingElem(self, x.payload / n)

    def p_val(self, x):
        return qval(x.payload, self.prime_p)

    def is_p_integral(self, x):
        return self.p_val(x) >= 0

    def specialize(self, x, bindings, target):
        return _q_image(x.payload, target)

    def _sample_unbounded(self, seed, policy):
        if policy is None or policy.int_bound is None:
            raise UnsupportedCtx("p-local sampling needs a policy with int_bound")
        rng = random.Random(seed)
        num = rng.randint(-policy.int_bound, policy.int_bound)
        den = rng.choice([d for d in range(1, 8) if d % self.prime_p != 0])
        return RingElem(self, Q(num) / den)

    def format_elem(self, x):
        return q_str(x.payload)

    def __eq__(self, other):
        return isinstance(other, PLocalRing) and other.prime_p == self.prime_p

    def __hash__(self):
        return hash(("plocal", self.prime_p))

    def __repr__(self):
        return f"Z_({self.prime_p})"

    def describe(self):
        return f"plocal:{self.prime_p}"


class ModRing(RingCtx):
    kind = "zmod"

    def __init__(self, m, prime_p=None):
        if m < 2:
            raise MalformedSpec(f"zmod modulus must be >= 2, got {m} (zero ring rejected)")
        self.m = m
        self.prime_p = prime_p

    def from_int(self, n):
        return RingElem(self, int(n) % self.m)

    def _canon(self, payload):
        return int(payload) % self.m

    def _add(self, a, b):
        return (a + b) % self.m

    def _mul(self, a, b):
        return (a * b) % self.m

    def _neg(self, a):
        return (-a) % self.m

    def _is_zero(self, a):
        return a == 0

    def inv(self, x):
        try:
            return RingElem(self, pow(x.payload, -1, self.m))
        except ValueError:
            raise NotAUnit(
                f"{x.payload} has gcd {math.gcd(x.payload, self.m)} with modulus {self.m}",
                witness=math.gcd(x.payload, self.m),
            ) from None

    def exact_div(self, x, y):
        sols = [z for z in self.elements() if (y * z).payload == x.payload]
        if not sols:
            raise NotIntegral(f"{x.payload}/{y.payload} has no solution mod {self.m}")
        return sols[0]

    def specialize(self, x, bindings, target):
        if isinstance(target, ModRing) and self.m % target.m == 0:
            return target.from_int(x.payload)
        raise UnsupportedCtx(f"no reduction from Z/{self.m} to {target}")

    def is_finite(self):
        return True

    def size(self):
        return self.m

    def elements(self):
        return (RingElem(self, r) for r in range(self.m))

    def element_at(self, idx):
        return RingElem(self, idx % self.m)

    def __eq__(self, other):
        return isinstance(other, ModRing) and other.m == self.m

    def __hash__(self):
        return hash(("zmod", self.m))

    def __repr__(self):
        return f"Z/({self.m})"

    def describe(self):
        return f"zmod:{self.m}"


# ---- dense univariate helpers over Q (for quotient-ring gcd work) ----------


def _qp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _qp_mul(a, b):
    if not a or not b:
        return []
    out = [Q(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _qp_trim(out)

def _qp_sub(a, b):
    out = list(a) + [Q(0)] * (len(b) - len(a))
    for i, bi in enumerate(b):
        out[i] -= bi
    return _qp_trim(out)


def _qp_divmod(a, b):
    a = list(a)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Q(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = a[-1] / b[-1]
        d = len(a) - len(b)
        quot[d] = c
        a = _qp_sub(a, [Q(0)] * d + [c * bi for bi in b])
        if len(a) >= len(b) and a and a[-1] == 0:
            _qp_trim(a)
    return quot, a


def _qp_ext_gcd(a, b):
    """(g, s, t) with s*a + t*b = g over Q[T], g monic (or zero)."""
    r0, r1 = list(a), list(b)
    s0, s1 = [QONE], []
    t0, t1 = [], [QONE]
    while r1:
        q, r = _qp_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _qp_sub(s0, _qp_mul(q, s1))
        t0, t1 = t1, _qp_sub(t0, _qp_mul(q, t1))
    if r0:
        lead = r0[-1]
        r0 = [c / lead for c in r0]
        s0 = [c / lead for c in s0]
        t0 = [c / lead for c in t0]
    return r0, s0, t0


class PolyQuotientRing(RingCtx):
    """base[T]/(modulus) for a monic univariate modulus of degree >= 1."""

    kind = "polyquot"

    def __init__(self, base, modulus, varname="T"):
        modulus = tuple(modulus)
        if len(modulus) < 2:
            raise MalformedSpec("polyquot modulus must have degree >= 1")
        if modulus[-1] != base.one.payload:
            raise MalformedSpec("polyquot modulus must be monic")
        self.base = base
        self.modulus = modulus
        self.deg = len(modulus) - 1
        self.varname = varname
        self.prime_p = base.prime_p

    def from_int(self, n):
        return RingElem(self, (self.base.from_int(n).payload,) + (self.base.zero.payload,) * (self.deg - 1))

    def gen(self):
        """The class of the quotient variable."""
        coeffs = [self.base.zero.payload] * self.deg
        if self.deg == 1:
            # T == -modulus[0] in a degree-1 quotient
            return RingElem(self, (self.base._neg(self.modulus[0]),))
        coeffs[1] = self.base.one.payload
        return RingElem(self, tuple(coeffs))

    def from_coeffs(self, coeffs):
        """Element with the given base coefficients (low degree first)."""
        lifted = [c.payload if isinstance(c, RingElem) else self.base.from_int(c).payload for c in coeffs]
        return self.el(tuple(lifted))

    def _canon(self, payload):
        return self._reduce(list(payload))

    def _reduce(self, coeffs):
        b = self.base
        while len(coeffs) > self.deg:
            c = coeffs.pop()
            if b._is_zero(c):
                continue
            d = len(coeffs) - self.deg
            for i in range(self.deg):
                coeffs[d + i] = b._add(coeffs[d + i], b._neg(b._mul(c, self.modulus[i])))
        coeffs += [b.zero.payload] * (self.deg - len(coeffs))
        return tuple(coeffs)

    def _add(self, a, b):
        return tuple(self.base._add(x, y) for x, y in zip(a, b))

    def _neg(self, a):
        return tuple(self.base._neg(x) for x in a)

    def _mul(self, a, b):
        bb = self.base
        out = [bb.zero.payload] * (2 * self.deg - 1)
        for i, ai in enumerate(a):
            if bb._is_zero(ai):
                continue
            for j, bj in enumerate(b):
                out[i + j] = bb._add(out[i + j], bb._mul(ai, bj))
        return self._reduce(out)

    def _is_zero(self, a):
        return all(self.base._is_zero(c) for c in a)

    # division in the fraction field (base must be plocal or int)
    def _field_inverse_coeffs(self, a):
        if not isinstance(self.base, (PLocalRing, IntegerRing)):
            raise UnsupportedCtx("field inversion needs a Q-based coefficient ring")
        poly = _qp_trim([Q(c) for c in a])
        mod = [Q(c) for c in self.modulus]
        g, s, _ = _qp_ext_gcd(poly, mod)
        if len(g) != 1:
            raise NotInvertible("shares a factor with the modulus")
        _, inv = _qp_divmod(_qp_mul(s, [QONE / g[0]]), mod)
        inv = list(inv) + [Q(0)] * (self.deg - len(inv))
        return inv[: self.deg]

    def _residue_witness(self, x):
        # image of x under T -> 1 reduced mod p, when that map exists
        p = self.prime_p
        if p is None:
            return None
        mod_at_1 = sum(Q(c) for c in self.modulus)
        if qval(mod_at_1, p) < 1:
            return None
        total = sum(Q(c) for c in x.payload)
        if qval(total, p) < 0:
            return None
        num, den = qnum(total), qden(total)
        return (num * pow(den, -1, p)) % p

    def inv(self, x):
        if isinstance(self.base, PLocalRing):
            p = self.prime_p
            if self.p_val(x) < 0:
                raise NotAUnit("element is not p-integral", witness=self.p_val(x))
            try:
                inv = self._field_inverse_coeffs(x.payload)
            except NotInvertible as exc:
                raise NotAUnit(str(exc)) from exc
            if any(qval(c, p) < 0 for c in inv if c != 0):
                raise NotAUnit(
                    "field inverse is not p-integral",
                    witness=self._residue_witness(x),
                )
            return RingElem(self, tuple(inv))
        if isinstance(self.base, IntegerRing):
            inv = self._field_inverse_coeffs(tuple(Q(c) for c in x.payload))
            if any(not q_is_integer(c) for c in inv):
                raise NotAUnit("inverse has fractional coefficients")
            return RingElem(self, tuple(int(qnum(c)) for c in inv))
        if self.is_finite():
            for y in self.elements():
                if (x * y) == self.one:
                    return y
            raise NotAUnit("exhaustive search found no inverse", witness="exhausted")
        raise UnsupportedCtx("cannot invert over this coefficient ring")

    def exact_div(self, x, y):
        if isinstance(self.base, PLocalRing):
            inv = self._field_inverse_coeffs(y.payload)
            return x * RingElem(self, tuple(inv))
        if self.is_finite():
            for z in self.elements():
                if (y * z) == x:
                    return z
            raise NotIntegral("no exact quotient exists")
        raise UnsupportedCtx("exact_div unsupported over this base")

    def p_val(self, x):
        if not isinstance(self.base, PLocalRing):
            raise UnsupportedCtx("p_val needs a p-local coefficient ring")
        vals = [qval(c, self.prime_p) for c in x.payload if c != 0]
        return min(vals, default=math.inf)

    def is_p_integral(self, x):
        return self.p_val(x) >= 0

    def specialize(self, x, bindings, target):
        t = bindings.get(self.varname)
        if t is None:
            raise UnboundSymbol(f"binding for quotient variable {self.varname} required")
        img_mod = target.zero
        for c in reversed(self.modulus):
            img_mod = img_mod * t + self._coeff_image(c, target)
        if not img_mod.is_zero():
            raise MalformedSpec(f"binding {t!r} does not annihilate the modulus")
        out = target.zero
        for c in reversed(x.payload):
            out = out * t + self._coeff_image(c, target)
        return out

    def _coeff_image(self, c, target):
        if isinstance(self.base, PLocalRing):
            return _q_image(c, target)
        if isinstance(self.base, IntegerRing):
            return target.from_int(c)
        if isinstance(self.base, ModRing):
            if not target.from_int(self.base.m).is_zero():
                raise UnsupportedCtx(f"no homomorphism from Z/{self.base.m} coefficients to {target}")
            return target.from_int(c)
        raise UnsupportedCtx("unsupported coefficient image")

    def is_finite(self):
        return self.base.is_finite()

    def size(self):
        return self.base.size() ** self.deg

    def element_at(self, idx):
        n = self.base.size()
        idx %= self.size()
        coeffs = []
        for _ in range(self.deg):
            coeffs.append(self.base.element_at(idx % n).payload)
            idx //= n
        return RingElem(self, tuple(coeffs))

    def elements(self):
        return (self.element_at(i) for i in range(self.size()))

    def _sample_unbounded(self, seed, policy):
        rng = random.Random(seed)
        coeffs = [self.base.sample(rng.randrange(1 << 30), policy).payload for _ in range(self.deg)]
        return RingElem(self, tuple(coeffs))

    def format_elem(self, x):
        parts = []
        for i, c in enumerate(x.payload):
            if self.base._is_zero(c):
                continue
            cs = self.base.format_elem(RingElem(self.base, c))
            if i == 0:
                parts.append(cs)
            else:
                var = self.varname if i == 1 else f"{self.varname}^{i}"
                parts.append(var if cs == "1" else f"{cs}*{var}")
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other):
        return (
            isinstance(other, PolyQuotientRing)
            and other.base == self.base
            and other.modulus == self.modulus
            and other.varname == self.varname
        )

    def __hash__(self):
        return hash(("polyquot", self.base, self.modulus, self.varname))

    def __repr__(self):
        return f"{self.base}[{self.varname}]/(deg {self.deg})"

    def describe(self):
        names = []
        for i, c in enumerate(self.modulus):
            if self.base._is_zero(c):
                continue
            cs = self.base.format_elem(RingElem(self.base, c))
            term = cs if i == 0 else (self.varname if i == 1 else f"{self.varname}^{i}")
            if i > 0 and cs != "1":
                term = f"{cs}*{term}"
            names.append(term)
        return f"polyquot:{self.base.describe()};{'+'.join(names)}"


class SymbolicLaurentRing(RingCtx):
    """Q[gens] with designated symbols inverted, over a locality prime p.

    Optional substitutions bind a generator to a closed-form QPoly in the
    remaining generators (used to pin the nu_k symbols to their universal
    values).  Bindings are resolved once, at construction; cycles are
    rejected.
    """

    kind = "laurent"

    def __init__(self, p, gens, laurent=(), substitutions=None):
        if p < 2 or any(p % q == 0 for q in range(2, int(math.isqrt(p)) + 1)):
            raise MalformedSpec(f"laurent prime must be prime, got {p}")
        gens = tuple(gens)
        if len(set(gens)) != len(gens):
            raise MalformedSpec("duplicate generator names")
        for s in laurent:
            if s not in gens:
                raise MalformedSpec(f"laurent symbol {s} is not a generator")
        self.prime_p = p
        self.gens = gens
        self.index = {g: i for i, g in enumerate(gens)}
        self.laurent = frozenset(laurent)
        self._laurent_idx = frozenset(self.index[s] for s in self.laurent)
        self.substitutions = self._resolve_substitutions(substitutions or {})

    def _resolve_substitutions(self, raw):
        for name in raw:
            if name not in self.index:
                raise MalformedSpec(f"substitution target {name} is not a generator")
            if name in self.laurent:
                raise MalformedSpec(f"laurent symbol {name} cannot be substituted")
        resolved = {}
        visiting = set()
        n = len(self.gens)

        def resolve(name):
            if name in resolved:
                return resolved[name]
            if name in visiting:
                raise MalformedSpec(f"cyclic substitution through {name}")
            visiting.add(name)
            poly = raw[name]
            used = poly.used_vars()
            if self.index[name] in used:
                raise MalformedSpec(f"cyclic substitution through {name}")
            values = []
            for i, g in enumerate(self.gens):
                if g in raw and g != name and i in used:
                    values.append(resolve(g))
                else:
                    values.append(QPoly.gen(n, i))
            out = poly.subs(values)
            visiting.discard(name)
            resolved[name] = out
            return out

        for name in raw:
            resolve(name)
        return resolved

    def _expand(self, poly):
        if not self.substitutions:
            return poly
        bound = {self.index[n] for n in self.substitutions}
        if not (poly.used_vars() & bound):
            return poly
        values = []
        for i, g in enumerate(self.gens):
            values.append(self.substitutions.get(g, QPoly.gen(len(self.gens), i)))
        return poly.subs(values)

    def _canon(self, payload):
        poly = self._expand(payload)
        bad = poly.used_vars() - self._laurent_idx
        for e in poly.terms:
            for i in bad:
                if e[i] < 0:
                    raise MalformedSpec(f"negative exponent on non-laurent symbol {self.gens[i]}")
        return poly

    def from_int(self, n):
        return RingElem(self, QPoly.const(len(self.gens), n))

    def from_q(self, q):
        return RingElem(self, QPoly.const(len(self.gens), q))

    def gen(self, name, e=1):
        if name not in self.index:
            raise UnboundSymbol(f"unknown generator {name}")
        if e < 0 and name not in self.laurent:
            raise MalformedSpec(f"negative exponent on non-laurent symbol {name}")
        g = self.el(QPoly.gen(len(self.gens), self.index[name], e))
        return g

    def _add(self, a, b):
        return a + b

    def _mul(self, a, b):
        return a * b

    def _neg(self, a):
        return -a

    def _is_zero(self, a):
        return a.is_zero()

    def inv(self, x):
        poly = x.payload
        if not poly.is_monomial():
            raise NotAUnit("not a monomial", witness="non-monomial")
        e, c = poly.single_term()
        for i, ei in enumerate(e):
            if ei and i not in self._laurent_idx:
                raise NotAUnit(f"symbol {self.gens[i]} is not invertible")
        return RingElem(self, QPoly.monomial(len(self.gens), tuple(-ei for ei in e), QONE / c))

    def exact_div(self, x, y):
        poly = y.payload
        if not poly.is_monomial():
            raise UnsupportedCtx("laurent division only by monomials")
        e, c = poly.single_term()
        out = x.payload.shift(tuple(-ei for ei in e)).scale(QONE / c)
        return self.el(out)

    def div_int(self, x, n):
        return self.el(x.payload.scale(QONE / n))

    def p_val(self, x):
        return x.payload.min_p_val(self.prime_p)

    def is_p_integral(self, x):
        if x.payload.min_p_val(self.prime_p) < 0:
            return False
        return not x.payload.has_negative_exp()

    def specialize(self, x, bindings, target):
        out = target.zero
        pow_cache = {}
        for e, c in x.payload.items_sorted():
            term = _q_image(c, target)
            for i, ei in enumerate(e):
                if ei == 0:
                    continue
                name = self.gens[i]
                if name not in bindings:
                    raise UnboundSymbol(f"symbol {name} is unbound")
                key = (i, ei)
                if key not in pow_cache:
                    base = bindings[name]
                    if ei >= 0:
                        pow_cache[key] = base ** ei
                    else:
                        try:
                            pow_cache[key] = target.inv(base) ** (-ei)
                        except NotAUnit as exc:
                            raise NotIntegral(f"binding of {name} is not invertible in target") from exc
                term = term * pow_cache[key]
            out = out + term
        return out

    def _sample_unbounded(self, seed, policy):
        if policy is None:
            raise UnsupportedCtx("symbolic sampling needs a degree-bounded policy")
        rng = random.Random(seed)
        n = len(self.gens)
        acc = QPoly.zero(n)
        for _ in range(policy.terms):
            expo = [0] * n
            for i in range(n):
                if rng.random() < 0.5:
                    lo = -policy.degree if i in self._laurent_idx else 0
                    expo[i] = rng.randint(lo, policy.degree)
            acc = acc + QPoly.monomial(n, tuple(expo), rng.randint(-policy.coeff_bound, policy.coeff_bound))
        return self.el(acc)

    def format_elem(self, x):
        return x.payload.to_str(self.gens)

    def __eq__(self, other):
        return (
            isinstance(other, SymbolicLaurentRing)
            and other.prime_p == self.prime_p
            and other.gens == self.gens
            and other.laurent == self.laurent
            and other.substitutions == self.substitutions
        )

    def __hash__(self):
        return hash(("laurent", self.prime_p, self.gens, self.laurent, tuple(sorted(self.substitutions))))

    def __repr__(self):
        return f"Q[{','.join(self.gens)}; p={self.prime_p}]"

    def describe(self):
        s = f"laurent:p={self.prime_p};gens={','.join(self.gens)}"
        if self.laurent:
            s += f";laurent={','.join(sorted(self.laurent))}"
        return s
