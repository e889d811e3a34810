"""Trajectories of the discrete free-path map and batch runs.

A trajectory starts at ``q0`` and jumps by ``v``; it is absorbed at the first
step ``j >= 1`` whose position ``q0 + j*v`` lies within ``eps/2`` of a
scatterer.  Runs are censored at ``max_steps``.
"""

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import kernels_numpy, rng
from ._accel import resolve_backend
from .errors import ResourceLimitError
from .pointsets import DIAGNOSTICS, GOLDEN, Periodic, kernel_args, nearest_distance

log = logging.getLogger(__name__)

DEFAULT_T_MAX = 50.0
MAX_TRAJECTORIES = 2 * 10**8
CHUNK_SIZE = 1 << 15


class ConfigError(ValueError):
    """Invalid simulation parameter; ``param`` names the offending field."""

    def __init__(self, param, message):
        super().__init__(f"{param}: {message}")
        self.param = param
        self.message = message


def default_max_steps(epsilon, t_max=DEFAULT_T_MAX):
    # round first so 50/1e-4 gives 500000, not 500001
    return max(1, math.ceil(round(t_max / epsilon, 6)))


@dataclass(frozen=True)
class SimConfig:
    epsilon: float
    n_trajectories: int
    q0_span: float = 10_000 * GOLDEN.spacing
    v_max: float = GOLDEN.spacing
    seed: int = 0
    max_steps: int = None
    t_max: float = DEFAULT_T_MAX

    def __post_init__(self):
        if not (isinstance(self.epsilon, (int, float)) and self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ConfigError("epsilon", f"must be a positive finite number, got {self.epsilon!r}")
        if int(self.n_trajectories) != self.n_trajectories or self.n_trajectories < 1:
            raise ConfigError("n_trajectories", f"must be a positive integer, got {self.n_trajectories!r}")
        if not self.q0_span > 0:
            raise ConfigError("q0_span", f"must be > 0, got {self.q0_span!r}")
        if not self.v_max > 0:
            raise ConfigError("v_max", f"must be > 0, got {self.v_max!r}")
        if not self.t_max > 0:
            raise ConfigError("t_max", f"must be > 0, got {self.t_max!r}")
        if self.max_steps is None:
            object.__setattr__(self, "max_steps", default_max_steps(self.epsilon, self.t_max))
        if int(self.max_steps) != self.max_steps or self.max_steps < 1:
            raise ConfigError("max_steps", f"must be a positive integer, got {self.max_steps!r}")
        object.__setattr__(self, "n_trajectories", int(self.n_trajectories))
        object.__setattr__(self, "max_steps", int(self.max_steps))
        object.__setattr__(self, "seed", int(self.seed) & 0xFFFFFFFFFFFFFFFF)

    @property
    def censor_limit(self):
        return self.epsilon * self.max_steps

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "n_trajectories": self.n_trajectories,
            "q0_span": self.q0_span,
            "v_max": self.v_max,
            "seed": self.seed,
            "max_steps": self.max_steps,
            "t_max": self.t_max,
        }


@dataclass(frozen=True)
class Hit:
    k: int


@dataclass(frozen=True)
class Censored:
    cap: int


def _check_jump(v, eps, cap):
    if not v > 0:
        raise ValueError(f"jump length must be > 0, got {v!r}")
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps!r}")
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap!r}")


def free_path_steps(q0, v, fld, eps, cap, block=4096):
    """Step-by-step first hit, straight from the definition.

    This is the reference the fast kernels are checked against; it evaluates
    :func:`nearest_distance` at every position ``q0 + j*v``.
    """
    _check_jump(v, eps, cap)
    half = eps / 2.0
    for start in range(1, cap + 1, block):
        j = np.arange(start, min(start + block, cap + 1), dtype=np.int64)
        hit = np.flatnonzero(nearest_distance(fld, q0 + j * v) <= half)
        if hit.size:
            return Hit(int(j[hit[0]]))
    return Censored(cap)


def channel_free_path_2d(q0, theta, eps, cap):
    """Free path in the 2-D periodic channel via its line-crossing map.

    Successive crossings are ``tan(theta)`` apart; the scatterer half-width on
    the line is ``sqrt(eps)/2``.  Returns ``(outcome, scaled_time)`` with
    ``scaled_time = sqrt(eps)*k/cos(theta)`` or ``None`` when censored.
    """
    if not 0.0 <= theta <= math.pi / 4:
        raise ValueError(f"theta must be in [0, pi/4], got {theta!r}")
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps!r}")
    width = math.sqrt(eps)
    v = math.tan(theta)
    if v == 0.0:
        # vertical motion: the crossing point never moves
        if nearest_distance(Periodic(1.0), q0) <= width / 2.0:
            out = Hit(1)
        else:
            return Censored(cap), None
    else:
        out = free_path_steps(q0, v, Periodic(1.0), width, cap)
    if isinstance(out, Censored):
        return out, None
    return out, width * out.k / math.cos(theta)


def sample_trajectory_params(config, i):
    """``(q0, v)`` for trajectory index ``i`` (scalar or array).

    ``q0`` is uniform on ``[0, q0_span)`` and ``v`` uniform on ``(0, v_max]``;
    both are pure functions of ``(seed, i)``.
    """
    i = np.asarray(i, dtype=np.int64)
    if i.size and (i.min() < 0 or i.max() >= config.n_trajectories):
        raise IndexError("trajectory index out of range")
    q0 = config.q0_span * rng.uniform(config.seed, i, rng.STREAM_Q0)
    v = config.v_max * (1.0 - rng.uniform(config.seed, i, rng.STREAM_V))
    if i.ndim == 0:
        return float(q0), float(v)
    return q0, v


def first_hits(fld, q0s, vs, eps, cap, backend=None):
    """Hitting steps for arrays of start points and jumps (0 = censored)."""
    q0s = np.ascontiguousarray(q0s, dtype=np.float64)
    vs = np.ascontiguousarray(vs, dtype=np.float64)
    if q0s.shape != vs.shape:
        raise ValueError("q0s and vs must have the same shape")
    if vs.size and not np.all(vs > 0):
        raise ValueError("jump lengths must be > 0")
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps!r}")
    if cap < 1:
        raise ValueError(f"cap must be >= 1, got {cap!r}")
    if resolve_backend(backend) == "numba":
        from . import kernels_numba

        out = np.empty(q0s.size, dtype=np.int64)
        kernels_numba.first_hits(q0s.ravel(), vs.ravel(), float(eps), int(cap), *kernel_args(fld), out)
        return out.reshape(q0s.shape)
    return kernels_numpy.first_hits(q0s.ravel(), vs.ravel(), float(eps), int(cap), fld).reshape(q0s.shape)


@dataclass
class BatchResult:
    """Per-trajectory hitting steps of one run; ``steps[i] == 0`` means censored."""

    config: SimConfig
    field: object
    steps: np.ndarray = dc_field(repr=False)

    @property
    def n(self):
        return self.steps.size

    @property
    def cap(self):
        return self.config.max_steps

    @property
    def epsilon(self):
        return self.config.epsilon

    @property
    def censored(self):
        return int(np.count_nonzero(self.steps == 0))

    def histogram(self):
        """Exact counts per hitting step: ``counts[k]`` trajectories hit at step k."""
        return np.bincount(self.steps[self.steps > 0], minlength=self.cap + 1)

    def outcome(self, i):
        k = int(self.steps[i])
        return Hit(k) if k > 0 else Censored(self.cap)


def default_threads():
    return os.cpu_count() or 1


def run_batch(config, fld, threads=None, backend=None):
    """Run ``config.n_trajectories`` trajectories against ``fld``.

    Trajectories are processed in fixed-size index chunks so the result does
    not depend on ``threads``.
    """
    backend = resolve_backend(backend)
    threads = default_threads() if threads is None else int(threads)
    if threads < 1:
        raise ConfigError("threads", f"must be >= 1, got {threads}")
    n = config.n_trajectories
    if n > MAX_TRAJECTORIES:
        raise ResourceLimitError(f"{n} trajectories exceeds the limit of {MAX_TRAJECTORIES}")
    if 0 < fld.min_gap <= config.epsilon:
        DIAGNOSTICS.bump("overlapping_obstacles")
        log.warning("epsilon %g >= shortest gap %g: obstacles overlap", config.epsilon, fld.min_gap)

    steps = np.empty(n, dtype=np.int64)

    def work(lo):
        hi = min(lo + CHUNK_SIZE, n)
        q0, v = sample_trajectory_params(config, np.arange(lo, hi))
        steps[lo:hi] = first_hits(fld, q0, v, config.epsilon, config.max_steps, backend)

    chunks = range(0, n, CHUNK_SIZE)
    if threads == 1:
        for lo in chunks:
            work(lo)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, chunks))
    return BatchResult(config=config, field=fld, steps=steps)
