"""Exception types shared across the package."""


class BogaugeError(Exception):
    """Base class for all package-specific errors."""


class GridMismatchError(BogaugeError):
    """Two operands live on different grids."""


class MultiplierDomainError(BogaugeError):
    """A Fourier-multiplier symbol evaluated to a non-finite value."""


class MeanValueError(BogaugeError):
    """An operation requiring mean-zero input received data with nonzero mean."""


class BlowupError(BogaugeError):
    """The solution exceeded the max-norm guard during time integration.

    Attributes:
        time_reached: last time at which the state was still below the guard.
    """

    def __init__(self, message: str, time_reached: float):
        super().__init__(message)
        self.time_reached = time_reached


class EnvelopeAxiomError(BogaugeError):
    """A constructed frequency envelope failed one of its defining inequalities."""

    def __init__(self, violations):
        super().__init__(
            "envelope axioms violated: " + "; ".join(violations[:4])
            + ("" if len(violations) <= 4 else f" (+{len(violations) - 4} more)")
        )
        self.violations = list(violations)


class ConfigError(BogaugeError):
    """An experiment configuration failed validation."""
