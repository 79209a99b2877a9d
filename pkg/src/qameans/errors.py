"""Exception types shared across the package."""


class QamError(Exception):
    """Base class for all package errors."""


class ArgumentError(QamError, ValueError):
    """Structurally invalid argument: bad order, bad config, empty region."""


class RangeError(QamError, ValueError):
    """Value outside a generator's domain or range."""


class DegeneratePointError(QamError, ValueError):
    """Point violating the x != z separation requirement."""


class VanishingDerivativeError(QamError, ArithmeticError):
    """First derivative too close to zero for a well-defined ratio."""


class EvaluationError(QamError, ArithmeticError):
    """Function evaluation produced a non-finite value."""
