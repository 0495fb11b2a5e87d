"""Tiny exact linear helpers shared by the solvers.

Over finite rings a*x = r is solved by bounded enumeration (zero divisors
make division meaningless); over the Q-containing rings the quotient is
exact and unique.
"""

from .errors import NotIntegral, NotInvertible, UnsupportedCtx
from .rings.ctx import IntegerRing, PLocalRing, SymbolicLaurentRing


def linear_solutions(ctx, a, r, limit=None):
    """All x with a*x = r, in canonical enumeration order.

    Finite rings: exhaustive (optionally capped at `limit`, returning that
    many).  Infinite rings: the unique quotient when a is cancellable, []
    when no exact quotient exists; an underdetermined infinite system is
    rejected.
    """
    if ctx.is_finite():
        out = []
        for x in ctx.elements():
            if a * x == r:
                out.append(x)
                if limit is not None and len(out) >= limit:
                    break
        return out
    if a.is_zero():
        if r.is_zero():
            raise UnsupportedCtx("underdetermined linear equation over an infinite ring")
        return []
    if isinstance(ctx, (PLocalRing, SymbolicLaurentRing)):
        try:
            return [ctx.exact_div(r, a)]
        except (NotIntegral, NotInvertible, UnsupportedCtx):
            return []
    if isinstance(ctx, IntegerRing):
        try:
            return [ctx.exact_div(r, a)]
        except NotIntegral:
            return []
    try:
        return [ctx.exact_div(r, a)]
    except (NotIntegral, NotInvertible, UnsupportedCtx):
        return []
