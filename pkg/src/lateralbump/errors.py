"""Exception types raised across the package."""


class LateralBumpError(Exception):
    """Base class for all errors raised by this package."""


class InvalidPartition(LateralBumpError, ValueError):
    pass


class InvalidTableau(LateralBumpError, ValueError):
    pass


class NotAPermutationMatrix(LateralBumpError, ValueError):
    pass


class NonInjectiveWord(LateralBumpError, ValueError):
    pass


class MarginMismatch(LateralBumpError, ValueError):
    pass


class ShapeMismatch(LateralBumpError, ValueError):
    pass


class BlockTooLarge(LateralBumpError, ValueError):
    pass


class BoundExceeded(LateralBumpError, ValueError):
    pass


class MemoryBudgetExceeded(LateralBumpError, MemoryError):
    pass


class DomainError(LateralBumpError, ValueError):
    pass


class CoefficientOverflow(LateralBumpError, OverflowError):
    """A polynomial coefficient left the signed 64-bit range."""


class VerificationFailure(LateralBumpError, AssertionError):
    """A machine-checked statement failed on a concrete witness.

    ``witness`` holds the offending object in its canonical text encoding.
    """

    def __init__(self, check: str, witness: str, detail: str = ""):
        self.check = check
        self.witness = witness
        self.detail = detail
        msg = f"{check} failed on {witness}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
