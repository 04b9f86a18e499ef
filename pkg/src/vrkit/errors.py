"""Exception hierarchy shared by all vrkit modules."""


class VrkitError(ValueError):
    """Base class for every error raised by vrkit."""


class DegenerateInput(VrkitError):
    pass


class BranchAmbiguity(VrkitError):
    pass


class BranchCut(VrkitError):
    pass


class PoleAtOne(VrkitError):
    pass


class MalformedBoundary(VrkitError):
    pass


class OutOfDomain(VrkitError):
    pass


class OutOfRange(VrkitError):
    pass


class ToleranceUnreachable(VrkitError):
    """Step-size control underflowed; ``t`` holds the offending time."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class RejectionBudgetExceeded(VrkitError):
    pass
