"""Exception types shared across the package."""


class TopogatesError(Exception):
    """Base class for all errors raised by topogates."""


class PointOnPath(TopogatesError, ValueError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ApexOnPath(TopogatesError, ValueError):
    pass


class NotUnitary(TopogatesError, ValueError):
    pass


class DimensionMismatch(TopogatesError, ValueError):
    pass


class InvalidQubit(TopogatesError, IndexError):
    pass


class SameQubit(TopogatesError, ValueError):
    pass


class ClearanceViolation(TopogatesError, ValueError):
    pass


class LayoutInfeasible(TopogatesError):
    pass


class IncommensuratePhase(TopogatesError, ValueError):
    pass


class ZeroCoupling(TopogatesError, ValueError):
    pass


class ArchitectureViolation(TopogatesError, ValueError):
    pass


class UnsupportedGate(TopogatesError):
    pass


class TooLarge(TopogatesError, ValueError):
    pass
