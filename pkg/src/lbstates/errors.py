"""Exception types shared by all modules."""


class LbError(Exception):
    """Base class for package errors."""


class CutoffError(LbError):
    """A truncation window was violated, or a series tail bound could not
    be met within the configured cutoff.

    When raised from a series construction, ``tail_estimate`` holds the
    computed bound at the cutoff that failed the tolerance.
    """

    def __init__(self, message, tail_estimate=None):
        super().__init__(message)
        self.tail_estimate = tail_estimate


class ContractError(LbError):
    """An operation was called with an illegal pairing or a violated
    precondition (e.g. a state outside the required subspace)."""


class ShapeError(LbError):
    """Two operators or vectors live on different enumerations."""


class ExceptionalPointError(LbError):
    """A construction was requested at, or requires crossing, a level
    p = V**2 where the eigenvectors coalesce and the biorthogonal
    pairing degenerates."""

    def __init__(self, message, p=None, V=None):
        super().__init__(message)
        self.p = p
        self.V = V
