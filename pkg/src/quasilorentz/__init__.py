"""Free-path statistics of a 1-D discrete Lorentz gas on quasicrystal, periodic
and Poisson scatterers."""

from ._accel import NUMBA_AVAILABLE
from .cutproject import StripSpec, canonical_strip, centered_strip, cut_project_line, strip_accept
from .errors import InsufficientDataError, PrecisionRangeError, ResourceLimitError
from .pointsets import (
    GOLDEN,
    Chain,
    Fibonacci,
    GoldenConstants,
    Periodic,
    Poisson,
    chain_point,
    enumerate_points,
    fib_point,
    field_hit,
    golden_constants,
    matched_periodic,
    matched_poisson,
    nearest_distance,
)
from .simulate import (
    BatchResult,
    Censored,
    ConfigError,
    Hit,
    SimConfig,
    channel_free_path_2d,
    first_hits,
    free_path_steps,
    run_batch,
    sample_trajectory_params,
)
from .stats import (
    SurvivalCurve,
    TailFit,
    curve_sup_distance,
    default_thresholds,
    fit_exponential_tail,
    fit_power_tail,
    survival_from_steps,
)

__version__ = "0.1.0"
