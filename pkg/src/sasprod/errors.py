"""Exception types shared across the package."""


class SasprodError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(SasprodError, ValueError):
    """Input data violates a structural requirement."""


class NoSolutionError(SasprodError):
    """A parameter solver found no admissible solution.

    ``value`` carries the offending quantity (for example a non-positive
    ``b**2``) and ``case`` a short note on which branch was taken.
    """

    def __init__(self, message: str, value=None, case: str = ""):
        super().__init__(message)
        self.value = value
        self.case = case
