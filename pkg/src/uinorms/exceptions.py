"""Exception hierarchy shared across the package."""


class UINormsError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(UINormsError, ValueError):
    """Operand shapes are incompatible."""


class NonFiniteError(UINormsError, ValueError):
    """A matrix holds NaN or infinite entries."""


class NotHermitianError(UINormsError, ValueError):
    """A matrix expected to be Hermitian is not, within tolerance."""


class NotPSDError(UINormsError, ValueError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""

    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class ConvergenceError(UINormsError, ArithmeticError):
    """A Jacobi iteration exhausted its sweep budget."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class GenerationError(UINormsError, RuntimeError):
    """A random draw failed its class predicate."""


class ConfigError(UINormsError, ValueError):
    """Invalid campaign configuration or command-line input."""


class DigestError(UINormsError, ValueError):
    """A replay digest is malformed or does not match the configuration."""
