"""Exception hierarchy.

Everything raised deliberately by the library derives from :class:`QfgurError`
so callers (the CLI in particular) can separate input problems from bugs.
"""


class QfgurError(ValueError):
    """Base class for all library errors."""


class ParseError(QfgurError):
    """Malformed or invalid input file."""


# quantum objects
class NonOrthonormal(QfgurError):
    pass


class IncompleteBasis(QfgurError):
    pass


class NotPSD(QfgurError):
    pass


class NotCompleteToIdentity(QfgurError):
    pass


class NotHermitian(QfgurError):
    pass


class InvalidState(QfgurError):
    pass


class DimensionMismatch(QfgurError):
    pass


class BadFactorization(QfgurError):
    pass


class BadParameter(QfgurError):
    pass


class InvalidProbability(QfgurError):
    pass


# vectors
class NegativeComponent(QfgurError):
    pass


class PreconditionFailed(QfgurError):
    pass


class NotMonotone(QfgurError):
    pass


# bounds
class KOutOfRange(QfgurError):
    pass


class PoolTooLarge(QfgurError):
    pass


class BadSpectrum(QfgurError):
    pass


class NotProjective(QfgurError):
    pass


class NonPositiveBound(QfgurError):
    pass


# functionals / oracle
class SettingCountMismatch(QfgurError):
    pass


class LengthMismatch(QfgurError):
    pass


class DTooLarge(QfgurError):
    pass


class DimTooLarge(QfgurError):
    pass


class TooManyStrategies(QfgurError):
    pass


class RangeError(QfgurError):
    pass


class ConsistencyError(QfgurError):
    """Two computation routes that must agree did not."""
