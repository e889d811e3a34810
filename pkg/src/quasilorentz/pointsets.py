"""Scatterer fields on the line and O(1) point queries against them.

Four geometries are supported:

* :class:`Fibonacci` -- the golden-ratio quasicrystal
  ``x_m = m/nu + floor(m/tau)/(tau*nu)``,
* :class:`Chain` -- the same two-gap formula with an arbitrary slope ``s > 1``,
* :class:`Periodic` -- ``spacing * Z``,
* :class:`Poisson` -- one fixed realisation of a Poisson process, generated
  lazily cell by cell from a counter-based hash so that any query order sees
  the same points.

Queries accept scalars or numpy arrays.
"""

import math
import threading
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import rng
from .errors import PrecisionRangeError, ResourceLimitError

MAX_INDEX = 2**40
MAX_ENUMERATE = 10**8


@dataclass(frozen=True)
class GoldenConstants:
    tau: float
    nu: float
    alpha: float
    spacing: float


def golden_constants():
    """Constants of the Fibonacci chain, all derived from one ``sqrt(5)``."""
    tau = (1.0 + math.sqrt(5.0)) / 2.0
    nu = math.sqrt(1.0 + tau * tau)
    return GoldenConstants(tau=tau, nu=nu, alpha=tau * tau / nu, spacing=nu / (tau * tau))


GOLDEN = golden_constants()


# --------------------------------------------------------------------------
# field descriptions

KIND_CHAIN = 0
KIND_PERIODIC = 1
KIND_POISSON = 2


def _chain_norms(slope):
    nu_s = math.sqrt(1.0 + slope * slope)
    return nu_s, slope * nu_s


@dataclass(frozen=True)
class Chain:
    """Two-gap chain ``x_m = m/nu_s + floor(m/s)/(s*nu_s)`` with ``nu_s = sqrt(1+s^2)``.

    Gaps are ``1/nu_s`` (short) and ``(1 + 1/s)/nu_s`` (long); the mean gap is
    ``nu_s/s^2``.
    """

    slope: float
    tag: str = dc_field(default="chain", repr=False, compare=False)

    def __post_init__(self):
        if not self.slope > 1.0:
            raise ValueError(f"chain slope must be > 1, got {self.slope!r}")

    @property
    def nu(self):
        return _chain_norms(self.slope)[0]

    @property
    def density(self):
        nu_s = self.nu
        return self.slope * self.slope / nu_s

    @property
    def min_gap(self):
        return 1.0 / self.nu

    def describe(self):
        return {"field": self.tag, "slope": self.slope}


@dataclass(frozen=True)
class Fibonacci(Chain):
    """The golden-ratio chain; density ``tau^2/nu``."""

    slope: float = dc_field(default=GOLDEN.tau, init=False)
    tag: str = dc_field(default="fibonacci", repr=False, compare=False)

    def describe(self):
        return {"field": self.tag}


@dataclass(frozen=True)
class Periodic:
    spacing: float
    tag: str = dc_field(default="periodic", repr=False, compare=False)

    def __post_init__(self):
        if not self.spacing > 0.0:
            raise ValueError(f"periodic spacing must be > 0, got {self.spacing!r}")

    @property
    def density(self):
        return 1.0 / self.spacing

    @property
    def min_gap(self):
        return self.spacing

    def describe(self):
        return {"field": self.tag, "spacing": self.spacing}


@dataclass(frozen=True)
class Poisson:
    """A single Poisson realisation with the given intensity.

    The line is cut into cells ``[c*w, (c+1)*w)`` with ``w = cell_size``
    (default ``1/intensity``).  Cell ``c`` holds ``K`` points, ``K`` drawn by
    inversion from ``uniform(seed, c, 0)``, at ``(c + uniform(seed, c, k)) * w``
    for ``k = 1..K``.  ``K`` is clamped at :attr:`max_per_cell`, far in the tail.
    """

    intensity: float
    seed: int = 0
    cell_size: float = None
    tag: str = dc_field(default="poisson", repr=False, compare=False)

    def __post_init__(self):
        if not self.intensity > 0.0:
            raise ValueError(f"poisson intensity must be > 0, got {self.intensity!r}")
        if self.cell_size is None:
            object.__setattr__(self, "cell_size", 1.0 / self.intensity)
        if not self.cell_size > 0.0:
            raise ValueError(f"cell_size must be > 0, got {self.cell_size!r}")
        object.__setattr__(self, "seed", int(self.seed) & 0xFFFFFFFFFFFFFFFF)

    @property
    def density(self):
        return self.intensity

    @property
    def mean_per_cell(self):
        return self.intensity * self.cell_size

    @property
    def exp_neg_mean(self):
        return math.exp(-self.mean_per_cell)

    @property
    def max_per_cell(self):
        lam = self.mean_per_cell
        return int(lam + 20.0 * math.sqrt(lam) + 50.0)

    @property
    def min_gap(self):
        # two Poisson points can be arbitrarily close
        return 0.0

    def describe(self):
        return {
            "field": self.tag,
            "intensity": self.intensity,
            "seed": self.seed,
            "cell_size": self.cell_size,
        }


def fibonacci():
    return Fibonacci()


def matched_periodic():
    """Periodic lattice with the Fibonacci density, ``(nu/tau^2) Z``."""
    return Periodic(GOLDEN.spacing)


def matched_poisson(seed, cell_size=None):
    return Poisson(GOLDEN.alpha, seed=seed, cell_size=cell_size)


def kernel_args(fld):
    """Flatten a field into the scalar tuple the batch kernels take.

    ``(kind, a, b, c, seed, kmax)``: for chains ``a, b, c = s, nu_s, s*nu_s``;
    periodic ``a = spacing``; Poisson ``a, b, c = cell_size, mean, exp(-mean)``.
    """
    if isinstance(fld, Chain):
        nu_s, snu = _chain_norms(fld.slope)
        return KIND_CHAIN, float(fld.slope), nu_s, snu, np.uint64(0), 0
    if isinstance(fld, Periodic):
        return KIND_PERIODIC, float(fld.spacing), 0.0, 0.0, np.uint64(0), 0
    if isinstance(fld, Poisson):
        return (
            KIND_POISSON,
            float(fld.cell_size),
            fld.mean_per_cell,
            fld.exp_neg_mean,
            np.uint64(fld.seed),
            fld.max_per_cell,
        )
    raise TypeError(f"not a scatterer field: {fld!r}")


# --------------------------------------------------------------------------
# diagnostics


class _Diagnostics:
    def __init__(self):
        self._lock = threading.Lock()
        self._counts = {}

    def bump(self, key, n=1):
        with self._lock:
            self._counts[key] = self._counts.get(key, 0) + n

    def snapshot(self):
        with self._lock:
            return dict(self._counts)

    def reset(self):
        with self._lock:
            self._counts.clear()


DIAGNOSTICS = _Diagnostics()


def diagnostics():
    """Counters of flagged queries, e.g. ``{"overlapping_obstacles": 3}``."""
    return DIAGNOSTICS.snapshot()


def reset_diagnostics():
    DIAGNOSTICS.reset()


# --------------------------------------------------------------------------
# chain points


def _check_index(m):
    m = np.asarray(m)
    if not np.issubdtype(m.dtype, np.integer):
        raise TypeError("point index must be an integer")
    if m.size and np.max(np.abs(m.astype(np.int64))) > MAX_INDEX:
        raise PrecisionRangeError("|m| must be <= 2**40 for float64 accuracy")
    return m.astype(np.int64)


def _chain_x(m, slope, nu_s, snu):
    # kernels_numba._chain_x evaluates the identical expression
    return m / nu_s + np.floor(m / slope) / snu


def chain_point(m, s):
    """Position of point ``m`` of the two-gap chain with slope ``s``."""
    if not s > 1.0:
        raise ValueError(f"slope must be > 1, got {s!r}")
    mm = _check_index(m)
    nu_s, snu = _chain_norms(s)
    out = _chain_x(mm, float(s), nu_s, snu)
    return float(out) if out.ndim == 0 else out


def fib_point(m):
    """Position of the ``m``-th Fibonacci quasicrystal point, ``x_0 = 0``."""
    return chain_point(m, GOLDEN.tau)


# --------------------------------------------------------------------------
# Poisson cells


def poisson_cell_counts(fld, cells):
    """Number of points in each cell (vectorised inversion sampler)."""
    cells = np.asarray(cells, dtype=np.int64)
    u = rng.uniform(fld.seed, cells, 0)
    lam = fld.mean_per_cell
    p = np.full(cells.shape, fld.exp_neg_mean)
    cdf = p.copy()
    count = np.zeros(cells.shape, dtype=np.int64)
    for k in range(1, fld.max_per_cell + 1):
        more = u > cdf
        if not more.any():
            break
        count[more] = k
        p = p * lam / k
        cdf = cdf + p
    return count


def poisson_cell_points(fld, cells):
    """Points of the given cells as ``(owner, positions)``.

    ``owner[i]`` indexes into ``cells``; positions are sorted within each cell.
    """
    cells = np.atleast_1d(np.asarray(cells, dtype=np.int64))
    counts = poisson_cell_counts(fld, cells)
    owner = np.repeat(np.arange(cells.size), counts)
    starts = np.cumsum(counts) - counts
    k = np.arange(owner.size) - starts[owner] + 1
    c = cells[owner]
    pos = (c + rng.uniform(fld.seed, c, k)) * fld.cell_size
    order = np.lexsort((pos, owner))
    return owner[order], pos[order]


# --------------------------------------------------------------------------
# queries


def nearest_distance(fld, y):
    """Exact distance from ``y`` to the closest point of ``fld``."""
    y = np.asarray(y, dtype=np.float64)
    if isinstance(fld, Chain):
        out = _nearest_chain(fld, y)
    elif isinstance(fld, Periodic):
        n = np.rint(y / fld.spacing)
        out = np.min([np.abs(y - (n + d) * fld.spacing) for d in (-1, 0, 1)], axis=0)
    elif isinstance(fld, Poisson):
        out = _nearest_poisson(fld, y)
    else:
        raise TypeError(f"not a scatterer field: {fld!r}")
    return float(out) if np.ndim(out) == 0 else out


def _nearest_chain(fld, y):
    nu_s, snu = _chain_norms(fld.slope)
    m0 = np.floor(y * fld.density).astype(np.int64)
    if m0.size and np.max(np.abs(m0)) > MAX_INDEX - 3:
        raise PrecisionRangeError("query position beyond the accurate index range")
    best = np.full(y.shape, np.inf)
    for d in range(-3, 4):
        best = np.minimum(best, np.abs(y - _chain_x(m0 + d, fld.slope, nu_s, snu)))
    return best


def _nearest_poisson(fld, y):
    w = fld.cell_size
    flat = np.atleast_1d(y).ravel()
    home = np.floor(flat / w).astype(np.int64)
    best = np.full(flat.shape, np.inf)
    active = np.arange(flat.size)
    d = 0
    while active.size:
        offsets = (0,) if d == 0 else (-d, d)
        for off in offsets:
            cells = home[active] + off
            owner, pos = poisson_cell_points(fld, cells)
            if pos.size:
                dist = np.abs(flat[active][owner] - pos)
                np.minimum.at(best, active[owner], dist)
        d += 1
        # nearest unexplored cells start at these distances
        left_gap = flat[active] - (home[active] - d + 1) * w
        right_gap = (home[active] + d) * w - flat[active]
        active = active[np.minimum(left_gap, right_gap) < best[active]]
    return best.reshape(np.shape(y))


def field_hit(fld, y, eps):
    """True where ``y`` lies within ``eps/2`` of a field point (inclusive)."""
    if not eps > 0.0:
        raise ValueError(f"eps must be > 0, got {eps!r}")
    if eps >= fld.min_gap:
        DIAGNOSTICS.bump("overlapping_obstacles")
    hit = np.asarray(nearest_distance(fld, y)) <= eps / 2.0
    return bool(hit) if hit.ndim == 0 else hit


def enumerate_points(fld, a, b):
    """All points of ``fld`` in ``[a, b)``, sorted."""
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b})")
    if (b - a) * fld.density > MAX_ENUMERATE:
        raise ResourceLimitError(f"interval [{a}, {b}) holds ~{(b - a) * fld.density:.3g} points")
    if isinstance(fld, Chain):
        nu_s, snu = _chain_norms(fld.slope)
        lo = math.floor(a * fld.density) - 3
        hi = math.ceil(b * fld.density) + 3
        m = _check_index(np.arange(lo, hi + 1, dtype=np.int64))
        x = _chain_x(m, fld.slope, nu_s, snu)
    elif isinstance(fld, Periodic):
        n = np.arange(math.floor(a / fld.spacing) - 1, math.ceil(b / fld.spacing) + 2)
        x = n * fld.spacing
    elif isinstance(fld, Poisson):
        cells = np.arange(math.floor(a / fld.cell_size) - 1, math.floor(b / fld.cell_size) + 2)
        _, x = poisson_cell_points(fld, cells)
        x = np.sort(x)
    else:
        raise TypeError(f"not a scatterer field: {fld!r}")
    return x[(x >= a) & (x < b)]
