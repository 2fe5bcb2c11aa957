"""Kernel smoothing of functional time series.

Thin wrapper over the compiled ``_fts`` extension. Arrays are n x P with one
row per time point.
"""

from ._fts import (
    CvReport,
    Estimate,
    InputError,
    NumericError,
    __version__,
    bandwidth_grid,
    cross_validate,
    cusum,
    detect_peaks,
    kernel_moment,
    max_threads,
    monte_carlo,
    quartic,
    quartic_star,
    residual_norms,
    set_max_threads,
    simulate,
    sliding_embed,
    smooth,
)

__all__ = [
    "CvReport",
    "Estimate",
    "InputError",
    "NumericError",
    "__version__",
    "bandwidth_grid",
    "cross_validate",
    "cusum",
    "detect_peaks",
    "kernel_moment",
    "max_threads",
    "monte_carlo",
    "quartic",
    "quartic_star",
    "residual_norms",
    "set_max_threads",
    "simulate",
    "sliding_embed",
    "smooth",
]
