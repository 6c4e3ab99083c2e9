"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A parameter bundle violates its invariants (e.g. eta <= 1)."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class TuningError(ValueError):
    """A tuning rule produced an unusable value (e.g. r <= 0)."""


class QueryError(ValueError):
    """A query that requires data was issued against an empty distribution."""


class StateError(ValueError):
    """A stateful operation was invoked before its preconditions held."""


class PairingError(ValueError):
    """Paired two-sample evaluation was requested with unequal sample counts."""


class NumericalError(RuntimeError):
    """An iterative numerical routine failed to converge."""
