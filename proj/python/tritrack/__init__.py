"""Wave-front tracking for triangular hyperbolic systems.

The heavy lifting lives in the C++ core; this package re-exports the bound
types and functions.
"""

from ._core import (
    BlowupData,
    CharTrace,
    CrosscheckReport,
    ElementaryWave,
    FluxModel,
    Simulation,
    SimStats,
    Snapshot,
    StepFunction,
    TraceCrossing,
    TvResult,
    WaveKind,
    blowup_ratio_product,
    blowup_wft_crosscheck,
    build_blowup_data,
    bvs_partial_sums,
    check_ush,
    rh_factor,
    sample_to_grid,
    sample_to_grid_tvd,
    shock_speed,
    system_riemann,
    tvs,
    tvs_bruteforce,
)

__all__ = [
    "BlowupData",
    "CharTrace",
    "CrosscheckReport",
    "ElementaryWave",
    "FluxModel",
    "Simulation",
    "SimStats",
    "Snapshot",
    "StepFunction",
    "TraceCrossing",
    "TvResult",
    "WaveKind",
    "blowup_ratio_product",
    "blowup_wft_crosscheck",
    "build_blowup_data",
    "bvs_partial_sums",
    "check_ush",
    "rh_factor",
    "sample_to_grid",
    "sample_to_grid_tvd",
    "shock_speed",
    "system_riemann",
    "tvs",
    "tvs_bruteforce",
]
