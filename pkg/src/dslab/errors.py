"""Exception types raised by the dslab verification engines."""


class DslabError(Exception):
    """Base class for dslab failures that are not plain precondition errors."""


class ArgumentOutOfRange(DslabError, ValueError):
    """A series evaluation did not converge within its term cap or argument cap."""


class QuadratureError(DslabError):
    """Adaptive quadrature exhausted its subdivision budget."""


class TruncationTooShort(DslabError):
    """The analytic tail bound of a semi-infinite integral exceeds abs_tol."""


class InconsistencyError(DslabError):
    """Two independent routes to the same exact quantity disagreed."""


class ConfigError(DslabError):
    """A configuration file could not be read or parsed."""
