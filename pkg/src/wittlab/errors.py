"""Exception types shared across the package.

Every error raised by wittlab derives from WittlabError.  Errors that the
surrounding machinery is expected to catch and turn into report verdicts
(budget exhaustion, scenario validation) are separated from errors that
signal an arithmetic bug (IntegralityFailure, BinomialDivisibilityFailure):
the latter should never occur on valid inputs.
"""


class WittlabError(Exception):
    pass


class MalformedSpec(WittlabError):
    """Bad ring/config description.  Carries the offending text position."""

    def __init__(self, message, text=None, pos=None):
        if text is not None and pos is not None:
            message = f"{message} (at position {pos}: ...{text[pos:pos + 16]!r})"
        super().__init__(message)
        self.text = text
        self.pos = pos


class CtxMismatch(WittlabError):
    pass


class NotAUnit(WittlabError):
    """Inversion failed.  `witness` explains why (residue, gcd, search)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotInvertible(WittlabError):
    pass


class UnsupportedCtx(WittlabError):
    pass


class NotIntegral(WittlabError):
    pass


class UnboundSymbol(WittlabError):
    pass


class LengthMismatch(WittlabError):
    pass


class LengthTooShort(WittlabError):
    pass


class IntegralityFailure(WittlabError):
    """Exact division by a p-power left a fractional coefficient.

    Signals an implementation bug or a violated paper claim, never an
    expected runtime condition.
    """


class BinomialDivisibilityFailure(WittlabError):
    def __init__(self, i, message=None):
        super().__init__(message or f"binomial divisibility failed at i={i}")
        self.i = i


class RelationViolated(WittlabError):
    def __init__(self, k, message=None):
        super().__init__(message or f"nu-relation violated at k={k}")
        self.k = k


class NonUnitConstantTerm(WittlabError):
    pass


class NonzeroConstantTerm(WittlabError):
    pass


class NonUnitBase(WittlabError):
    pass


class NonInvertibleFactorial(WittlabError):
    pass


class CapMismatch(WittlabError):
    pass


class Unsolvable(WittlabError):
    pass


class AmbiguousSolution(WittlabError):
    """Multiple expansions exist over a ring with zero divisors."""

    def __init__(self, solutions, message=None):
        super().__init__(message or f"{len(solutions)} distinct solutions")
        self.solutions = solutions


class NoSuchA(WittlabError):
    pass


class BudgetExceeded(WittlabError):
    pass


class ScenarioInvalid(WittlabError):
    pass


class HypothesisViolated(WittlabError):
    pass


class NotInKernel(WittlabError):
    pass


class UnsupportedE(WittlabError):
    pass


class DerivationLimitExceeded(WittlabError):
    pass
