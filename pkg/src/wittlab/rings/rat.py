"""Exact rational scalars.

All coefficient arithmetic in the package goes through the type Q defined
here.  Q is gmpy2.mpq when gmpy2 is available (much faster on the dense
series computations) and fractions.Fraction otherwise; both expose
.numerator/.denominator and exact +,-,*,/,**.
"""

import math

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 is an optional accelerator
    from fractions import Fraction as Q

QZERO = Q(0)
QONE = Q(1)


def qnum(q):
    return int(q.numerator)


def qden(q):
    return int(q.denominator)


def q_is_integer(q):
    return int(q.denominator) == 1


def int_val(n, p):
    """p-adic valuation of a nonzero integer."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("valuation of 0 is +infinity")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def qval(q, p):
    """p-adic valuation of a rational; math.inf for 0."""
    if q == 0:
        return math.inf
    return int_val(qnum(q), p) - int_val(qden(q), p)


def q_str(q):
    """Canonical literal: "n" or "n/d" with d > 0."""
    n, d = qnum(q), qden(q)
    return str(n) if d == 1 else f"{n}/{d}"


def binom_int(n, k):
    """Exact integer binomial coefficient for integer n >= 0."""
    return math.comb(n, k)
