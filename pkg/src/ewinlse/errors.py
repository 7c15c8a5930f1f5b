"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid or inconsistent configuration (grids, study specs, CLI config)."""


class BlowUpError(RuntimeError):
    """The iterate became non-finite (NaN/Inf) during time stepping."""

    def __init__(self, step_index: int, message: str | None = None):
        self.step_index = step_index
        super().__init__(message or f"solution blew up at step {step_index}")


class CacheError(RuntimeError):
    """A cached reference file is corrupt or does not match the request."""


class FitError(ValueError):
    """Not enough usable points to fit a convergence order."""
