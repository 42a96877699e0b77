"""Exception hierarchy.

Three branches matter to callers: ``ConfigError`` (a bad request),
``DataError`` (the supplied data cannot support the request), and
``NumericalError`` (a computation failed).  The command-line driver maps
these onto exit codes 2, 3 and 4.
"""


class GlmShapleyError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(GlmShapleyError):
    """The requested configuration is invalid or inconsistent."""


class UnsupportedModeError(ConfigError):
    """A mode flag was combined with a model that does not support it."""


class DataError(GlmShapleyError):
    """The data cannot support the requested analysis."""


class ColumnError(DataError):
    """A named column is missing from the input table."""


class DegenerateColumnError(DataError):
    """A regressor column is constant or a factor has fewer than 2 levels."""


class MissingValueError(DataError):
    """Rows contain missing values in used columns."""

    def __init__(self, message, rows=()):
        super().__init__(message)
        self.rows = tuple(rows)


class ResponseTypeError(DataError):
    """The response column is not numeric."""


class ResponseDomainError(DataError):
    """Response values fall outside the family's support."""


class DegenerateRunError(DataError):
    """The response is constant, so the null deviance vanishes."""


class DegenerateHurdleError(DataError):
    """One part of the hurdle split is empty."""


class UndefinedZetaError(DataError):
    """The null log-likelihood is zero, so zeta is undefined."""


class NumericalError(GlmShapleyError):
    """A numerical computation failed."""


class SingularDesignError(NumericalError):
    """The selected design matrix is rank deficient."""

    def __init__(self, aliased):
        self.aliased = tuple(aliased)
        super().__init__(
            "design matrix is rank deficient; aliased columns: "
            + ", ".join(self.aliased)
        )


class NonConvergenceError(NumericalError):
    """Maximum likelihood iteration failed to converge.

    Carries the best iterate seen (a ``FittedGlm`` with ``converged=False``)
    and the per-iteration log-likelihood trace.
    """

    def __init__(self, message, best=None, trace=()):
        super().__init__(message)
        self.best = best
        self.trace = tuple(trace)


class DivergenceInfiniteError(NumericalError):
    """A mean vector sits on the boundary of the family's mean domain."""


class EnumerationError(NumericalError):
    """A subset fit failed during enumeration.

    Names the failing subset (bitmask plus player names) and keeps the
    underlying diagnostic as ``__cause__`` where available.
    """

    def __init__(self, mask, players, detail):
        self.mask = mask
        self.players = tuple(players)
        super().__init__(
            f"fit failed for subset 0b{mask:b} ({{{', '.join(self.players) or 'intercept only'}}}): {detail}"
        )
