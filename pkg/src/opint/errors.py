"""Exception hierarchy shared by all opint modules."""


class OpintError(Exception):
    """Base class for every error raised by this package."""


class NonHermitian(OpintError, ValueError):
    pass


class NotNormal(OpintError, ValueError):
    pass


class NoConvergence(OpintError, RuntimeError):
    pass


class InvalidP(OpintError, ValueError):
    pass


class InvalidExponents(OpintError, ValueError):
    pass


class DomainError(OpintError, ValueError):
    pass


class DimensionMismatch(OpintError, ValueError):
    pass


class UnsupportedOrder(OpintError, ValueError):
    pass


class DerivativeUnavailable(OpintError, ValueError):
    pass


class GridTooCoarse(OpintError, ValueError):
    pass


class Divergent(OpintError, ValueError):
    pass


class UnknownSuite(OpintError, KeyError):
    pass


class ConfigError(OpintError, ValueError):
    pass
