"""Exception hierarchy shared by all qsera modules."""


class QseraError(Exception):
    """Base class for every error raised by this package."""


class InputDomainError(QseraError, ValueError):
    """An argument lies outside the domain an operation accepts."""


class CapacityError(QseraError):
    """The problem is larger than the exhaustive/simulation budget allows."""


class DegenerateRangeError(QseraError, ValueError):
    """The rescaling range collapses (f_max == f_min, or a zero root scale)."""


class LayoutError(QseraError):
    """The qubit layout cannot host the requested circuit."""


class UndefinedPortfolioError(QseraError, ValueError):
    """A portfolio statistic was requested for the empty selection."""
