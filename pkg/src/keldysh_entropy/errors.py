"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """A model, lattice or sweep configuration is inconsistent."""


class DiagonalizationError(RuntimeError):
    """The dense eigensolver failed; carries the realization label."""

    def __init__(self, label: str, original: Exception):
        super().__init__(f"eigensolver failed for {label}: {original}")
        self.label = label
        self.original = original


class SingularPivotError(RuntimeError):
    """The equal-time Green's function pivot block is numerically singular."""


class CapacityError(ValueError):
    """A many-body request exceeds the supported Fock-space size."""


class NotSaturatedError(RuntimeError):
    """An entropy curve has no late-time plateau; carries the tail slope."""

    def __init__(self, tail_slope: float):
        super().__init__(
            f"series is not saturated: |d ln S / d ln t| = {abs(tail_slope):.4f} > 0.05 "
            "over the last time decade"
        )
        self.tail_slope = tail_slope


class SweepError(RuntimeError):
    """A disorder sweep failed (for example too many skipped realizations)."""
