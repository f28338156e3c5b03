"""Phase-based analysis of meromorphic functions."""

from .chromatic import ChromaticResult, as_expr, chromatic_number, count_zeros_poles
from .harmonic import WILMSHURST_FRAME, wilmshurst, zero_line_crossings
from .localize import Entry, SingularityReport, find_saddles, localize_singularities
from .periodicity import (
    Aperiodic,
    DoublyPeriodic,
    NotPeriodic,
    PhasePeriodic,
    SimplyPeriodicPhase,
    Striped,
    classify_periodicity,
    is_striped,
    phase_period_test,
)
from .probes import crossings, essential_probe, log_derivative_density
from .series import partial_sum

__all__ = [
    "ChromaticResult",
    "as_expr",
    "chromatic_number",
    "count_zeros_poles",
    "Entry",
    "SingularityReport",
    "localize_singularities",
    "find_saddles",
    "log_derivative_density",
    "essential_probe",
    "crossings",
    "phase_period_test",
    "classify_periodicity",
    "is_striped",
    "NotPeriodic",
    "PhasePeriodic",
    "Striped",
    "SimplyPeriodicPhase",
    "DoublyPeriodic",
    "Aperiodic",
    "partial_sum",
    "wilmshurst",
    "zero_line_crossings",
    "WILMSHURST_FRAME",
]
