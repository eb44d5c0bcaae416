"""Exception hierarchy shared by every entrank module."""


class EntrankError(ValueError):
    """Base class for all input and contract errors raised by entrank."""


class NonHermitianInput(EntrankError):
    pass


class DimensionZero(EntrankError):
    pass


class DimensionMismatch(EntrankError):
    pass


class NotNormalized(EntrankError):
    pass


class InvalidState(EntrankError):
    """Matrix is not a density matrix (trace, positivity)."""


class WeightSumInvalid(EntrankError):
    pass


class RankOutOfRange(EntrankError):
    pass


class SingularScaling(EntrankError):
    """Marginal spectrum too ill-conditioned for a reliable local filter."""


class NegativeAlpha(EntrankError):
    pass


class DimensionNotTwoByTwo(EntrankError):
    pass


class NotIsometry(EntrankError):
    pass


class KTooSmall(EntrankError):
    pass


class ResourceCapExceeded(EntrankError):
    """Requested computation is above the desk-scale caps."""


class BudgetExceeded(RuntimeError):
    """Time budget ran out; ``partial`` holds the rows completed so far."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = list(partial or [])
