"""Exception types shared across the package."""


class LayerScatError(Exception):
    """Base class for all package errors."""


class DomainError(LayerScatError, ValueError):
    """Input lies outside the mathematical domain of an operation."""


class SingularityError(DomainError):
    """Evaluation requested at (or too close to) a kernel singularity."""


class AccuracyError(LayerScatError, RuntimeError):
    """Quadrature failed to reach the requested tolerance.

    Carries the achieved error estimate in ``estimate``.
    """

    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (achieved estimate {estimate:.3e})")
        self.estimate = estimate


class SolverError(LayerScatError, RuntimeError):
    """Linear system is singular or too ill-conditioned to trust."""


class ConfigError(LayerScatError, ValueError):
    """Run configuration failed validation."""
