"""Two-qubit entanglement measures."""

from pulsecontrol.analytics.measures import (
    DensityMatrix,
    MeasureReport,
    concurrence,
    concurrence_via_R,
    entropy_from_concurrence,
    entropy_log4,
    measure_report,
    purity,
    spin_flip,
)

__all__ = [
    "DensityMatrix",
    "MeasureReport",
    "concurrence",
    "concurrence_via_R",
    "entropy_from_concurrence",
    "entropy_log4",
    "measure_report",
    "purity",
    "spin_flip",
]
