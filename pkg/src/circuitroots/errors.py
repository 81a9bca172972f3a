"""Exception types shared across the package."""


class CircuitRootsError(Exception):
    """Base class for all package errors."""


class DomainError(CircuitRootsError):
    """An argument is outside the mathematical domain of the operation."""


class RankError(CircuitRootsError):
    """A matrix does not have the rank required by the operation."""


class SingularExponents(CircuitRootsError):
    """The exponent matrix of a binomial system is singular."""


class ZeroPolynomial(CircuitRootsError):
    """The zero polynomial was passed where a nonzero one is required."""


class NotIsolating(CircuitRootsError):
    """An interval fails the sign conditions of an isolating interval."""


class DegreeTooSmall(CircuitRootsError):
    """The polynomial degree is below what the operation needs."""


class HyperplaneSupport(CircuitRootsError):
    """All support points lie in a common affine hyperplane."""


class GenericityError(CircuitRootsError):
    """A genericity condition required for certified counting fails.

    Carries a human-readable description of the failing condition so the
    refusal can be reported instead of silently miscounting.
    """


class NotACriticalPoint(CircuitRootsError):
    """The given interval does not isolate a critical point."""


class NotAPole(CircuitRootsError):
    """The given endpoint is not a pole of the log-linear form."""


class BudgetExceeded(CircuitRootsError):
    """Adaptive precision climbed past its certified ceiling.

    Reaching the Matveev-type ceiling indicates an implementation bug; the
    only legitimate way to see this error is an artificially lowered cap
    (COUNT_PRECISION_CAP_BITS).
    """


class InternalError(CircuitRootsError):
    """An invariant the implementation relies on was violated."""


class ParseError(CircuitRootsError):
    """The input document is not syntactically valid."""


class ValidationError(CircuitRootsError):
    """The input document violates a structural invariant."""
