"""Strip (cut-and-project) construction of one-dimensional quasicrystals.

Lattice points ``p`` of Z^2 are accepted when their coordinate along the unit
normal ``omega/|omega|`` falls inside a window; the accepted points are then
projected onto the line ``E = {x : x . omega = 0}``.

With ``omega = (-1, tau)`` and :func:`canonical_strip` this reproduces the
Fibonacci chain of :func:`quasilorentz.pointsets.fib_point` point for point,
which is what makes it useful as an independent check of that formula.
"""

import math
from dataclasses import dataclass

import numpy as np

MAX_COLUMNS = 10**7


@dataclass(frozen=True)
class StripSpec:
    omega: tuple
    window_lo: float
    window_hi: float
    half_open: bool = True

    def __post_init__(self):
        w0, w1 = (float(c) for c in self.omega)
        object.__setattr__(self, "omega", (w0, w1))
        if w0 == 0.0 or w1 == 0.0:
            raise ValueError("omega needs two nonzero components")
        if not self.window_lo < self.window_hi:
            raise ValueError("window_lo must be below window_hi")

    @property
    def norm(self):
        return math.hypot(*self.omega)

    @property
    def normal(self):
        n = self.norm
        return self.omega[0] / n, self.omega[1] / n

    @property
    def direction(self):
        """Unit vector spanning E, oriented so the x-component is positive."""
        n = self.norm
        e = (self.omega[1] / n, -self.omega[0] / n)
        return e if e[0] > 0 else (-e[0], -e[1])


def canonical_strip(slope):
    """``omega = (-1, slope)`` with the window of the cell ``(-1, 0] x [0, 1)``.

    That cell projects to ``[0, (1 + slope)/nu)`` on the normal line.  It keeps
    the origin and matches ``floor(m/slope)`` in the chain formula exactly; the
    centred cell (:func:`centered_strip`) gives a different, non-congruent chain.
    """
    nu = math.hypot(1.0, slope)
    return StripSpec((-1.0, slope), 0.0, (1.0 + slope) / nu, True)


def centered_strip(slope):
    """Window of the unit square centred at the origin."""
    nu = math.hypot(1.0, slope)
    h = (1.0 + slope) / (2.0 * nu)
    return StripSpec((-1.0, slope), -h, h, True)


def perp_coordinate(p, spec):
    p = np.asarray(p, dtype=np.float64)
    return (p[..., 0] * spec.omega[0] + p[..., 1] * spec.omega[1]) / spec.norm


def strip_accept(p, spec):
    """Whether lattice point(s) ``p`` (shape ``(..., 2)``) lie in the strip."""
    t = perp_coordinate(p, spec)
    if spec.half_open:
        ok = (t >= spec.window_lo) & (t < spec.window_hi)
    else:
        ok = (t >= spec.window_lo) & (t <= spec.window_hi)
    return bool(ok) if np.ndim(ok) == 0 else ok


def accepted_lattice_points(spec, columns):
    """Accepted ``(a, b)`` pairs for first coordinates ``a`` in ``columns = (lo, hi)``.

    Each column is solved for its admissible second coordinates directly.
    """
    lo, hi = (int(c) for c in columns)
    if hi <= lo:
        return np.empty((0, 2), dtype=np.int64)
    if hi - lo > MAX_COLUMNS:
        raise ValueError(f"column range of {hi - lo} exceeds {MAX_COLUMNS}")
    w0, w1 = spec.omega
    n = spec.norm
    a = np.arange(lo, hi, dtype=np.int64)
    # window bounds mapped to b on each column
    b1 = (spec.window_lo * n - w0 * a) / w1
    b2 = (spec.window_hi * n - w0 * a) / w1
    b_start = np.floor(np.minimum(b1, b2)).astype(np.int64) - 1
    width = int(math.ceil(abs((spec.window_hi - spec.window_lo) * n / w1))) + 3
    cand_a = np.repeat(a, width)
    cand_b = (b_start[:, None] + np.arange(width)[None, :]).ravel()
    pts = np.stack([cand_a, cand_b], axis=1)
    return pts[strip_accept(pts, spec)]


def cut_project_line(spec, columns):
    """Sorted projections onto E of the accepted points in the column sweep."""
    pts = accepted_lattice_points(spec, columns)
    e0, e1 = spec.direction
    x = pts[:, 0] * e0 + pts[:, 1] * e1
    return np.sort(x)


def align_to_origin(points):
    """Translate so the point nearest the origin sits at 0; returns ``(points, shift)``."""
    points = np.asarray(points, dtype=np.float64)
    if points.size == 0:
        return points, 0.0
    shift = points[np.argmin(np.abs(points))]
    return points - shift, float(shift)


def gap_values(points, decimals=9):
    """Distinct gap magnitudes, rounded to ``decimals``."""
    return np.unique(np.round(np.diff(np.asarray(points)), decimals))
