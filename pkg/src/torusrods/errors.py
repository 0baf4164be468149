"""Exception hierarchy shared by the library and the command line front end."""


class TorusRodsError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(TorusRodsError, ValueError):
    """Malformed or out-of-domain input data (CLI exit code 1)."""


class InvalidSlopeError(InvalidInputError):
    pass


class InvalidRodError(InvalidInputError):
    pass


class NotCoprimeError(InvalidInputError):
    pass


class NotPrimitiveError(InvalidInputError):
    pass


class NotSaturatedError(InvalidInputError):
    pass


class ConfigError(InvalidInputError):
    """A rod configuration violates one of the required hypotheses.

    ``problems`` holds one human readable line per violated condition.
    """

    def __init__(self, message, problems=None):
        super().__init__(message)
        self.problems = list(problems) if problems else [message]


class CoincidentRodsError(ConfigError):
    """Two rods of a configuration have the same image in the 3-torus."""


class UnsupportedCaseError(TorusRodsError):
    """Input is well formed but outside the hypotheses we can decide (exit code 2)."""


class ResourceLimitError(TorusRodsError):
    """A search hit its configured hard limit before producing an answer (exit code 3)."""
