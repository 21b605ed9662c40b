"""Exception types shared across tetrablock."""


class DomainError(ValueError):
    """A coordinate or rank lies outside the pyramid."""


class RankOutOfRangeError(DomainError, IndexError):
    pass


class InvalidParameterError(ValueError):
    pass


class VerificationError(AssertionError):
    """An exactness check failed; carries the first offending rank."""

    def __init__(self, message, rank=None):
        super().__init__(message)
        self.rank = rank


class TimerResolutionError(RuntimeError):
    pass


class ResourceError(RuntimeError):
    pass
