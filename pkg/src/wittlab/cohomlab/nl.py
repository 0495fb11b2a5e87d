"""The finite kernel algebra A_n[X]/(psi) and the Cartier pairing.

Under the divisibility hypotheses (every nu_k divisible by p over a
Z/(p^n)-flavored ring) the kernel of the isogeny is finite of rank p^l
with nilpotent generator; its Hopf structure comes from the deformation
law, Delta(X) = X(x)1 + 1(x)X + lam X(x)X.  The pairing sends a kernel
vector v to the unit E(v, lam; X) reduced mod psi, and group-likeness of
that unit is decided by exact tensor-square tables.
"""

import itertools

from ..ahdeform import ep_vec
from ..errors import BudgetExceeded, HypothesisViolated, NotInKernel, ScenarioInvalid
from ..linalg import linear_solutions
from ..rings.ctx import PolyQuotientRing
from ..witt import f_lambda, t_map, witt_add


class TensorSquare:
    """B (x) B for B = ctx[X]/(psi), coordinates on X^i (x) X^j."""

    def __init__(self, alg):
        self.alg = alg
        self.rank = alg.rank

    def zero(self):
        return {}

    def unit(self):
        return {(0, 0): self.alg.ctx.one}

    def add(self, s, t):
        out = dict(s)
        for key, c in t.items():
            v = out.get(key, self.alg.ctx.zero) + c
            if v.is_zero():
                out.pop(key, None)
            else:
                out[key] = v
        return out

    def scale(self, s, c):
        out = {}
        for key, v in s.items():
            w = v * c
            if not w.is_zero():
                out[key] = w
        return out

    def mul(self, s, t):
        out = {}
        for (i1, j1), c1 in s.items():
            for (i2, j2), c2 in t.items():
                left = self.alg.basis_product(i1, i2)
                right = self.alg.basis_product(j1, j2)
                c = c1 * c2
                for li, lc in left:
                    for rj, rc in right:
                        v = out.get((li, rj), self.alg.ctx.zero) + c * lc * rc
                        if v.is_zero():
                            out.pop((li, rj), None)
                        else:
                            out[(li, rj)] = v
        return out

    def pure(self, x, y):
        """x (x) y for algebra elements given as coefficient tuples."""
        out = {}
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            for j, yj in enumerate(y):
                if yj.is_zero():
                    continue
                out[(i, j)] = xi * yj
        return out


class FiniteKernelAlg:
    """Free rank-p^l algebra with the deformation comultiplication."""

    def __init__(self, ctx, psi, lam):
        self.ctx = ctx
        self.psi = psi
        self.lam = lam
        self.rank = psi.degree
        modulus = [ctx.zero.payload]
        for alpha in psi.alphas:
            modulus.append(alpha.payload)
        modulus.append(ctx.one.payload)
        self.quot = PolyQuotientRing(ctx, tuple(modulus), varname="X")
        self._basis_prod = {}
        self.tensor = TensorSquare(self)
        self._delta_x_powers = None

    # elements are tuples of ctx coefficients on 1, X, ..., X^{rank-1}
    def from_coeffs(self, coeffs):
        lifted = tuple(c if not isinstance(c, int) else self.ctx.from_int(c) for c in coeffs)
        return lifted + (self.ctx.zero,) * (self.rank - len(lifted))

    def unit(self):
        return self.from_coeffs([self.ctx.one])

    def to_quot(self, x):
        return self.quot.el(tuple(c.payload for c in x))

    def from_quot(self, q):
        return tuple(self.ctx.el(c) for c in q.payload)

    def mul(self, x, y):
        return self.from_quot(self.to_quot(x) * self.to_quot(y))

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def basis_product(self, i, j):
        """X^i * X^j reduced mod psi, as sparse (index, coeff) pairs."""
        key = (i, j) if i <= j else (j, i)
        if key not in self._basis_prod:
            xi = [self.ctx.zero] * self.rank
            xi[key[0]] = self.ctx.one
            xj = [self.ctx.zero] * self.rank
            xj[key[1]] = self.ctx.one
            prod = self.mul(tuple(xi), tuple(xj))
            self._basis_prod[key] = [(n, c) for n, c in enumerate(prod) if not c.is_zero()]
        return self._basis_prod[key]

    def delta_x_power(self, k):
        """Delta(X)^k in the tensor square (Delta is an algebra map)."""
        if self._delta_x_powers is None:
            dx = {
                (1, 0): self.ctx.one,
                (0, 1): self.ctx.one,
            }
            if not self.lam.is_zero():
                dx[(1, 1)] = self.lam
            self._delta_x_powers = [self.tensor.unit(), dx]
        while len(self._delta_x_powers) <= k:
            self._delta_x_powers.append(self.tensor.mul(self._delta_x_powers[-1], self._delta_x_powers[1]))
        return self._delta_x_powers[k]

    def delta(self, x):
        out = self.tensor.zero()
        for k, c in enumerate(x):
            if not c.is_zero():
                out = self.tensor.add(out, self.tensor.scale(self.delta_x_power(k), c))
        return out

    def counit(self, x):
        return x[0]

    def is_grouplike(self, x):
        return self.counit(x) == self.ctx.one and self.delta(x) == self.tensor.pure(x, x)

    def all_grouplikes(self, budget=100000):
        if not self.ctx.is_finite():
            raise HypothesisViolated("group-like enumeration needs a finite ring")
        total = self.ctx.size() ** self.rank
        if total > budget:
            raise BudgetExceeded(f"{total} algebra elements exceed the budget {budget}")
        out = []
        for coeffs in itertools.product(list(self.ctx.elements()), repeat=self.rank):
            x = tuple(coeffs)
            if self.is_grouplike(x):
                out.append(x)
        return out

    def check_coassociative_and_counital(self):
        """Exact table checks on every basis power of the generator."""
        for k in range(self.rank):
            d = self.delta_x_power(k)
            left = {}
            right = {}
            for (i, j), c in d.items():
                for (a, b), c2 in self.delta_x_power(i).items():
                    key = (a, b, j)
                    v = left.get(key, self.ctx.zero) + c * c2
                    if v.is_zero():
                        left.pop(key, None)
                    else:
                        left[key] = v
                for (a, b), c2 in self.delta_x_power(j).items():
                    key = (i, a, b)
                    v = right.get(key, self.ctx.zero) + c * c2
                    if v.is_zero():
                        right.pop(key, None)
                    else:
                        right[key] = v
            if left != right:
                return False
            # counit rows: (eps (x) id) Delta = id on X^k
            collapsed = {}
            for (i, j), c in d.items():
                if i == 0:
                    v = collapsed.get(j, self.ctx.zero) + c
                    if v.is_zero():
                        collapsed.pop(j, None)
                    else:
                        collapsed[j] = v
            expect = {k: self.ctx.one} if k < self.rank else {}
            if collapsed != expect:
                return False
        return True

    def nilpotency_index_of_x(self, bound=64):
        x = [self.ctx.zero] * self.rank
        if self.rank == 1:
            return None
        x[1] = self.ctx.one
        return self.quot.nilpotency_index(self.to_quot(tuple(x)), bound)


def nl_algebra(scn, nil_bound=64):
    """Build the kernel algebra after checking Lemma-level hypotheses."""
    ctx = scn.ctx
    p = scn.p
    char_is_p_power = False
    q = p
    for _ in range(30):
        if ctx.from_int(q).is_zero():
            char_is_p_power = True
            break
        q *= p
    if not char_is_p_power:
        raise HypothesisViolated("kernel algebra needs a Z/(p^n)-flavored base ring")
    for k, nuk in enumerate(scn.nu):
        if not linear_solutions(ctx, ctx.from_int(p), nuk, limit=1):
            raise HypothesisViolated(f"nu_{k} is not divisible by p")
    alg = FiniteKernelAlg(ctx, scn.psi, scn.lam)
    if not alg.check_coassociative_and_counital():
        raise ScenarioInvalid("comultiplication tables are not coassociative/counital")
    return alg


def cartier_pairing(scn, alg, v, kernel_mu=None):
    """phi(v) = E(v, lam; X) mod psi, with group-like and stability verdicts.

    v must lie in Ker(F^lam) at its length.  When kernel_mu (the
    enumerated Ker F^mu) is given, well-definedness is checked: shifting
    v by T_a(u) for each u there must not move the pairing value.
    """
    if not f_lambda(scn.lam, v).is_zero():
        raise NotInKernel("v is not in the kernel of the twisted Frobenius")
    e = _reduce_series_mod_psi(scn, alg, v)
    grouplike = alg.is_grouplike(e)
    stable = True
    if kernel_mu is not None:
        for u in kernel_mu:
            shifted = witt_add(v, t_map(scn.a, u))
            if _reduce_series_mod_psi(scn, alg, shifted) != e:
                stable = False
                break
    return e, grouplike, stable


def _reduce_series_mod_psi(scn, alg, v):
    cap = scn.cap
    xq = alg.quot.gen()
    # the window must absorb the nilpotency: X^{cap+1} = 0 in the quotient
    if not (xq ** (cap + 1)).is_zero():
        raise ScenarioInvalid("series cap is below the nilpotency index of the kernel algebra")
    from ..witt import zero_extend

    v_ext = zero_extend(v, max(len(v), scn.window_length()))
    series = ep_vec(v_ext, scn.lam, cap, vars_=("X",), var="X")
    acc = alg.quot.zero
    for (d,), c in series.items_sorted():
        acc = acc + (xq ** d) * alg.quot.from_coeffs([c])
    return alg.from_quot(acc)