"""Survival curves of the scaled free path and tail fits.

The survival curve at threshold ``T`` is the fraction of trajectories with
``eps * k >= T``; censored trajectories count as surviving every threshold up
to the censor limit ``eps * cap``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientDataError

MIN_FIT_POINTS = 5
DEFAULT_GRID_SIZE = 64
DEFAULT_GRID_START = 0.05
DEFAULT_GRID_END_FRACTION = 0.8


@dataclass(frozen=True)
class SurvivalCurve:
    thresholds: np.ndarray
    survival: np.ndarray
    count_ge: np.ndarray
    n: int
    epsilon: float
    field_tag: str
    censor_limit: float

    def __post_init__(self):
        if self.thresholds.size and np.any(np.diff(self.thresholds) <= 0):
            raise ValueError("thresholds must be strictly increasing")


@dataclass(frozen=True)
class TailFit:
    model: str  # "power_law" or "exponential"
    param: float  # exponent (power law) or decay rate (exponential)
    prefactor: float
    fit_range: tuple
    rms_residual: float
    n_points: int
    dropped_zero: int = 0

    def to_dict(self):
        return {
            "model": self.model,
            "param": self.param,
            "prefactor": self.prefactor,
            "range": list(self.fit_range),
            "rms_residual": self.rms_residual,
            "n_points": self.n_points,
            "dropped_zero": self.dropped_zero,
        }


def _float_sig15(x):
    return np.array([float(f"{t:.15g}") for t in np.atleast_1d(x)])


def default_thresholds(t_min, t_max, count):
    """Log-uniform grid from ``t_min`` to ``t_max`` inclusive.

    Values are rounded to 15 significant digits so they survive a text round
    trip unchanged.
    """
    if not (0 < t_min < t_max) or int(count) != count or count < 2:
        raise ValueError(f"need 0 < t_min < t_max and count >= 2, got ({t_min}, {t_max}, {count})")
    return _float_sig15(np.geomspace(t_min, t_max, int(count)))


def default_grid(censor_limit):
    return default_thresholds(DEFAULT_GRID_START, DEFAULT_GRID_END_FRACTION * censor_limit, DEFAULT_GRID_SIZE)


def survival_from_steps(hist, censored, epsilon, thresholds, field_tag=""):
    """Survival curve from exact hit counts.

    ``hist[k]`` is the number of trajectories absorbed at step ``k`` (index 0
    unused); the cap is ``len(hist) - 1``.  Censored trajectories survive every
    threshold.
    """
    hist = np.asarray(hist, dtype=np.int64)
    cap = hist.size - 1
    if cap < 1:
        raise ValueError("histogram must cover steps 1..cap")
    thresholds = np.asarray(thresholds, dtype=np.float64)
    limit = epsilon * cap
    over = thresholds[thresholds > limit]
    if over.size:
        raise ValueError(f"threshold T={float(over[0])!r} beyond censor limit {limit!r}")
    n = int(hist[1:].sum()) + int(censored)
    scaled = epsilon * np.arange(cap + 1, dtype=np.int64)
    tail = np.cumsum(hist[::-1])[::-1]  # tail[k] = #hits at steps >= k
    first = np.searchsorted(scaled[1:], thresholds, side="left") + 1
    count_ge = np.where(first <= cap, tail[np.minimum(first, cap)], 0) + int(censored)
    return SurvivalCurve(
        thresholds=thresholds,
        survival=count_ge / n,
        count_ge=count_ge,
        n=n,
        epsilon=float(epsilon),
        field_tag=field_tag,
        censor_limit=limit,
    )


def survival_from_batch(result, thresholds=None):
    if thresholds is None:
        thresholds = default_grid(result.config.censor_limit)
    tag = getattr(result.field, "tag", "")
    return survival_from_steps(result.histogram(), result.censored, result.epsilon, thresholds, tag)


def _fit_points(curve, t_range):
    lo, hi = t_range
    if not lo < hi:
        raise ValueError(f"fit range must have T_lo < T_hi, got {t_range}")
    if hi > curve.censor_limit:
        raise ValueError(f"fit range end {hi} beyond censor limit {curve.censor_limit}")
    inside = (curve.thresholds >= lo) & (curve.thresholds <= hi)
    t = curve.thresholds[inside]
    s = curve.survival[inside]
    keep = s > 0
    if keep.sum() < MIN_FIT_POINTS:
        raise InsufficientDataError(
            f"{keep.sum()} usable points in [{lo}, {hi}], need {MIN_FIT_POINTS}"
        )
    return t[keep], np.log(s[keep]), int((~keep).sum())


def _ols(x, y):
    A = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    return slope, intercept, float(np.sqrt(np.mean(resid**2)))


def fit_power_tail(curve, t_range):
    """Least-squares line through ``(log T, log survival)``; param is the slope."""
    t, logs, dropped = _fit_points(curve, t_range)
    slope, intercept, rms = _ols(np.log(t), logs)
    return TailFit("power_law", float(slope), float(np.exp(intercept)), tuple(t_range), rms, t.size, dropped)


def fit_exponential_tail(curve, t_range):
    """Least-squares line through ``(T, log survival)``; param is the decay rate."""
    t, logs, dropped = _fit_points(curve, t_range)
    slope, intercept, rms = _ols(t, logs)
    return TailFit("exponential", float(-slope), float(np.exp(intercept)), tuple(t_range), rms, t.size, dropped)


def curve_sup_distance(c1, c2, t_min):
    """Largest survival difference over the shared thresholds ``>= t_min``."""
    t1 = c1.thresholds[c1.thresholds >= t_min]
    t2 = c2.thresholds[c2.thresholds >= t_min]
    if t1.size == 0 or not np.array_equal(t1, t2):
        raise ValueError("curves do not share a threshold grid above t_min")
    s1 = c1.survival[c1.thresholds >= t_min]
    s2 = c2.survival[c2.thresholds >= t_min]
    return float(np.max(np.abs(s1 - s2)))
