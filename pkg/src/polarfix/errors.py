"""Exception hierarchy.

Every error raised by the library derives from :class:`PolarfixError`, so the
CLI can map whole families of failures onto stable exit codes.
"""


class PolarfixError(Exception):
    pass


# linear algebra
class NotSymmetric(PolarfixError):
    pass


class SingularOperator(PolarfixError):
    pass


class NotPositiveDefinite(PolarfixError):
    pass


class UnboundedLP(PolarfixError):
    pass


# representations
class RepresentationError(PolarfixError):
    """Base for errors that mean "this set/operator pair cannot be handled"."""


class DimensionMismatch(RepresentationError):
    pass


class UnsupportedRepresentation(RepresentationError):
    pass


class UnsupportedPushforward(RepresentationError):
    pass


class UnboundedSet(RepresentationError):
    pass


class NotACone(RepresentationError):
    pass


# solver
class ZeroGamma(PolarfixError):
    pass


class NotSemiSkew(PolarfixError):
    """Raised by the semi-skew detector; ``reason`` is one of the class constants."""

    NONZERO_TRACE = "NonzeroTrace"
    NONPOSITIVE_DETERMINANT = "NonpositiveDeterminant"
    SCALED_ROTATION = "ScaledRotation"
    WRONG_DIMENSION = "WrongDimension"

    def __init__(self, reason, message=None):
        self.reason = reason
        super().__init__(message or reason)


class NoConstructiveSolver(PolarfixError):
    def __init__(self, message, semi_skew=None):
        self.semi_skew = semi_skew
        super().__init__(message)


# gallery
class UnknownEntry(PolarfixError):
    pass


class BadParams(PolarfixError):
    pass
