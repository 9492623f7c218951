"""Exception types shared across the toolkit."""


class RadioGamiError(Exception):
    """Base class for all toolkit errors."""


class DomainError(RadioGamiError, ValueError):
    """An input fell outside the calibrated/tabulated domain of a model."""


class ModelError(RadioGamiError, RuntimeError):
    """A model could not produce a result (no solution, invalid regime)."""


class NoOscillationError(ModelError):
    """The oscillator loop cannot sustain oscillation.

    Carries the offending Eq.-style radicand value so callers can report
    exactly how far out of the oscillating regime the configuration is.
    """

    def __init__(self, radicand: float):
        self.radicand = radicand
        super().__init__(
            f"oscillation impossible: radicand 1 - R_T*|g_d| = {radicand:.6g} <= 0"
        )


class InputError(RadioGamiError, ValueError):
    """Malformed user input (files, configs, CLI arguments)."""
