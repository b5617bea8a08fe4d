"""Exception hierarchy."""


class GridTrustError(Exception):
    """Base class for all package errors."""


class ConfigError(GridTrustError, ValueError):
    """One or more configuration constraints are violated.

    ``violations`` holds one ``(constraint, message)`` tuple per problem so
    callers can report all of them at once.
    """

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [("config", violations)]
        self.violations = list(violations)
        super().__init__("; ".join(f"{key}: {msg}" for key, msg in self.violations))


class OrderingError(GridTrustError, ValueError):
    """A record would move ledger time backwards."""
