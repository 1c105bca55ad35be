"""Exception types shared across the package."""


class OldroydBoxError(Exception):
    """Base class for all package-specific errors."""


class GridMismatchError(OldroydBoxError):
    """Fields that must live on the same grid do not."""


class SymmetryError(OldroydBoxError):
    """Hermitian symmetry of a spectral field is broken beyond tolerance."""


class DegenerateProfileError(OldroydBoxError):
    """A random-field profile produced an identically zero field but a
    positive target norm was requested."""


class BlowUpError(OldroydBoxError):
    """NaN/Inf detected during time stepping.

    Carries the simulation time, the step index and the name of the first
    offending field so a run can report where it died.
    """

    def __init__(self, time, step_index, field):
        self.time = time
        self.step_index = step_index
        self.field = field
        super().__init__(
            f"non-finite values in '{field}' at t={time:.6g} (step {step_index})"
        )


class QuadratureError(OldroydBoxError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class FitWindowError(OldroydBoxError):
    """A power-law fit window is empty or contains unusable samples."""


class ConfigError(OldroydBoxError):
    """Invalid or unknown run-configuration content."""


class CheckpointError(OldroydBoxError):
    """Checkpoint file is malformed, truncated or inconsistent."""
