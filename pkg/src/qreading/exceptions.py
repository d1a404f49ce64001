"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a formula is defined."""


class UnsupportedPriorError(DomainError):
    """A closed-form strategy was requested for unequal priors."""


class IntegrationError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class TruncationError(RuntimeError):
    """A Fock-space state leaks too much norm past the truncation."""

    def __init__(self, message, suggested_dim=None):
        super().__init__(message)
        self.suggested_dim = suggested_dim


class OracleError(RuntimeError):
    """A brute-force cross-check produced internally inconsistent results."""
