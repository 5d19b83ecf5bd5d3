"""Mach-Zehnder interferometer with a quantum-controlled second beam splitter."""

from ._core import (
    AncillaOutcome,
    Blocking,
    DeviceSettings,
    DualityReport,
    NoiseModel,
    __version__,
    distinguishability,
    duality_sum,
    evolve,
    fringe_scan,
    full_report,
    generalized_metrics,
    mixed_final_state,
    particle_state,
    partial_trace,
    run,
    simulate,
    visibility,
    wave_state,
)

__all__ = [
    "AncillaOutcome",
    "Blocking",
    "DeviceSettings",
    "DualityReport",
    "NoiseModel",
    "__version__",
    "distinguishability",
    "duality_sum",
    "evolve",
    "fringe_scan",
    "full_report",
    "generalized_metrics",
    "mixed_final_state",
    "particle_state",
    "partial_trace",
    "run",
    "simulate",
    "visibility",
    "wave_state",
]
