"""Sparse multivariate Laurent polynomials over the exact rationals.

A QPoly with nvars = n stores {exponent_tuple: Q} with no zero values.
The tuple (2, 0, -1) over generators (U, L, M) means U^2 * M^-1.
Negative exponents are legal at this level; which generators may carry
them is a ring-context concern, enforced in ctx.py.

QPoly values are treated as immutable: no method mutates terms after
construction, so sharing and hashing are safe.
"""

from .rat import Q, QONE, QZERO, q_is_integer, q_str, qval


class QPoly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = terms if terms is not None else {}
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars):
        return cls(nvars, {})

    @classmethod
    def const(cls, nvars, c):
        c = Q(c)
        if c == 0:
            return cls(nvars, {})
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def gen(cls, nvars, i, e=1, c=1):
        expo = [0] * nvars
        expo[i] = e
        c = Q(c)
        if c == 0:
            return cls(nvars, {})
        return cls(nvars, {tuple(expo): c})

    @classmethod
    def monomial(cls, nvars, expo, c=1):
        c = Q(c)
        if c == 0:
            return cls(nvars, {})
        return cls(nvars, {tuple(expo): c})

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_const(self):
        if not self.terms:
            return True
        if len(self.terms) != 1:
            return False
        return next(iter(self.terms)) == (0,) * self.nvars

    def const_value(self):
        """Coefficient of the constant monomial (the whole value if constant)."""
        return self.terms.get((0,) * self.nvars, QZERO)

    def is_monomial(self):
        return len(self.terms) == 1

    def single_term(self):
        [(e, c)] = self.terms.items()
        return e, c

    def is_integral_coeffs(self):
        return all(q_is_integer(c) for c in self.terms.values())

    def has_negative_exp(self, indices=None):
        idx = range(self.nvars) if indices is None else indices
        return any(any(e[i] < 0 for i in idx) for e in self.terms)

    def total_degree(self):
        if not self.terms:
            return 0
        return max(sum(e) for e in self.terms)

    def used_vars(self):
        used = set()
        for e in self.terms:
            for i, ei in enumerate(e):
                if ei:
                    used.add(i)
        return used

    def min_p_val(self, p):
        """min over monomial coefficients of the p-adic valuation; inf if zero."""
        import math

        if not self.terms:
            return math.inf
        return min(qval(c, p) for c in self.terms.values())

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if self.nvars != other.nvars:
            raise ValueError(f"QPoly arity mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        self._check(other)
        res = dict(self.terms)
        for e, c in other.terms.items():
            s = res.get(e)
            if s is None:
                res[e] = c
            else:
                s = s + c
                if s == 0:
                    del res[e]
                else:
                    res[e] = s
        return QPoly(self.nvars, res)

    def __neg__(self):
        return QPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        self._check(other)
        res = dict(self.terms)
        for e, c in other.terms.items():
            s = res.get(e)
            if s is None:
                res[e] = -c
            else:
                s = s - c
                if s == 0:
                    del res[e]
                else:
                    res[e] = s
        return QPoly(self.nvars, res)

    def __mul__(self, other):
        if isinstance(other, (int, type(QONE))):
            return self.scale(other)
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        res = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                key = tuple(x + y for x, y in zip(e1, e2))
                s = res.get(key)
                if s is None:
                    res[key] = c1 * c2
                else:
                    s = s + c1 * c2
                    if s == 0:
                        del res[key]
                    else:
                        res[key] = s
        return QPoly(self.nvars, res)

    __rmul__ = __mul__

    def scale(self, c):
        c = Q(c)
        if c == 0:
            return QPoly.zero(self.nvars)
        return QPoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a QPoly; invert monomials explicitly")
        result = QPoly.const(self.nvars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n > 1
            n >>= 1
            if base_needed:
                base = base * base
        return result

    def shift(self, expo):
        """Multiply by the monomial with exponent vector `expo` (may be negative)."""
        expo = tuple(expo)
        return QPoly(self.nvars, {tuple(x + y for x, y in zip(e, expo)): c for e, c in self.terms.items()})

    def subs(self, values):
        """Evaluate with generator i replaced by values[i] (a QPoly of the
        target arity).  Negative exponents require the value to be a monomial."""
        if len(values) != self.nvars:
            raise ValueError("subs needs one value per generator")
        tgt = values[0].nvars if values else 0
        out = QPoly.zero(tgt)
        pow_cache = [dict() for _ in range(self.nvars)]
        for e, c in self.terms.items():
            term = QPoly.const(tgt, c)
            for i, ei in enumerate(e):
                if ei == 0:
                    continue
                cached = pow_cache[i].get(ei)
                if cached is None:
                    v = values[i]
                    if ei >= 0:
                        cached = v ** ei
                    else:
                        ve, vc = v.single_term()  # raises if not a monomial
                        cached = QPoly.monomial(tgt, tuple(x * ei for x in ve), QONE / (vc ** (-ei)))
                    pow_cache[i][ei] = cached
                term = term * cached
            out = out + term
        return out

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- presentation ------------------------------------------------------

    def items_sorted(self):
        """Terms in canonical order: by total degree, then exponent tuple."""
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]))

    def to_str(self, names):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.items_sorted():
            factors = []
            for i, ei in enumerate(e):
                if ei == 0:
                    continue
                factors.append(names[i] if ei == 1 else f"{names[i]}^{ei}")
            if not factors:
                parts.append(q_str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(q_str(c) + "*" + "*".join(factors))
        out = parts[0]
        for part in parts[1:]:
            out += part if part.startswith("-") else "+" + part
        return out

    def __repr__(self):
        return f"QPoly({self.nvars}, {self.to_str([f'g{i}' for i in range(self.nvars)])})"
