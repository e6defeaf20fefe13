"""Exception hierarchy."""


class ElicitError(ValueError):
    """Base class for all library errors."""


class ParseError(ElicitError):
    """A text literal could not be parsed."""


class DomainError(ElicitError):
    """A forecast lies outside the action domain of a score."""


class MomentError(ElicitError):
    """A distribution lacks the moments an operation needs."""


class ShapeError(ElicitError):
    """A shape function violates the requirements of a score family."""


class NonUniqueQuantileError(ElicitError):
    """The requested quantile level has a non-degenerate quantile interval."""


class PrecisionError(ElicitError):
    """Two evaluation paths disagree beyond tolerance, or an integral diverges."""


class BoundaryError(ElicitError):
    """The expected-score minimizer landed on the edge of its search box."""

    def __init__(self, msg, point=None):
        super().__init__(msg)
        self.point = point
