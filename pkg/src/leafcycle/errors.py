"""Exception hierarchy shared by all leafcycle modules."""


class FoliationError(Exception):
    """Base class for every error raised by leafcycle."""

    exit_code = 3


class SchemaError(FoliationError):
    """Input document does not match the expected JSON layout."""

    exit_code = 2

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"


class ZeroDivisorError(FoliationError, ZeroDivisionError):
    pass


class ContourCollisionError(FoliationError):
    pass


class ConvergenceError(FoliationError):
    pass


class DegenerateFieldError(FoliationError):
    pass


class LeafMismatchError(FoliationError):
    pass


class InconsistencyError(FoliationError):
    """Two independent methods disagree beyond tolerance."""

    exit_code = 4


class SingularPointError(FoliationError):
    pass


class TransversalityError(FoliationError):
    pass


class TubeExitError(FoliationError):
    pass


class StiffnessError(FoliationError):
    pass


class IllConditionedDerivativeError(FoliationError):
    pass


class UnsupportedDegreeError(FoliationError):
    pass
