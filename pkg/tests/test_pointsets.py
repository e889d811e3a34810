import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quasilorentz import pointsets as ps
from quasilorentz.cutproject import canonical_strip, cut_project_line
from quasilorentz.errors import PrecisionRangeError, ResourceLimitError

G = ps.golden_constants()
SHORT = 1 / G.nu
LONG = 1 / G.nu + 1 / (G.tau * G.nu)


def test_golden_constants():
    assert G.tau == pytest.approx(1.61803398874989, abs=1e-14)
    assert G.nu == pytest.approx(1.90211303259031, abs=1e-14)
    assert G.alpha == pytest.approx(1.37638192047117, abs=1e-14)
    assert abs(G.tau**2 - (G.tau + 1)) <= 2 * np.spacing(G.tau**2)
    assert G.nu**2 == pytest.approx(1 + G.tau**2, rel=1e-15)
    assert G.alpha * G.spacing == pytest.approx(1.0, rel=1e-15)
    assert G.alpha == pytest.approx(G.tau**2 / G.nu, rel=1e-15)


def test_fib_point_examples():
    assert ps.fib_point(0) == 0.0
    # (3*tau + 1)/(tau*nu) == nu since tau^3 = 2*tau + 1
    assert ps.fib_point(3) == pytest.approx(G.nu, abs=1e-15)
    assert ps.fib_point(2) - ps.fib_point(1) == pytest.approx(LONG, abs=1e-15)
    assert LONG == pytest.approx(0.85065081, abs=1e-8)


def test_fib_point_matches_strip_oracle():
    strip = cut_project_line(canonical_strip(G.tau), (-20, 20))
    m = np.arange(-10, 11)
    x = ps.fib_point(m)
    idx = np.searchsorted(strip, x - 1e-12)
    assert np.allclose(strip[idx], x, atol=1e-12, rtol=0)


def test_gap_dichotomy_and_word_ratio():
    x = ps.fib_point(np.arange(0, 10**6 + 1))
    gaps = np.diff(x)
    is_short = np.abs(gaps - SHORT) <= 1e-9
    is_long = np.abs(gaps - LONG) <= 1e-9
    assert np.all(is_short ^ is_long)
    assert abs(is_long.sum() / is_short.sum() - G.tau) <= 5e-3


def test_index_range_guard():
    ps.fib_point(2**40)
    with pytest.raises(PrecisionRangeError):
        ps.fib_point(2**40 + 1)
    with pytest.raises(PrecisionRangeError):
        ps.chain_point(np.array([0, -(2**40) - 1]), 2.0)


def test_chain_point_examples():
    assert ps.chain_point(0, 3.7) == 0.0
    assert ps.chain_point(1, 2.0) == pytest.approx(1 / math.sqrt(5), abs=1e-15)
    m = np.arange(-1000, 1001)
    assert np.array_equal(ps.chain_point(m, G.tau), ps.fib_point(m))
    with pytest.raises(ValueError):
        ps.chain_point(3, 1.0)
    with pytest.raises(ValueError):
        ps.Chain(0.5)


@pytest.mark.parametrize("s", [1.1, math.sqrt(2), G.tau, 2.0, math.e, math.pi, 7.3])
def test_chain_gaps_and_mean(s):
    nu_s = math.sqrt(1 + s * s)
    x = ps.chain_point(np.arange(12345, 12345 + 10**5 + 1), s)
    gaps = np.diff(x)
    short = np.abs(gaps - 1 / nu_s) <= 1e-9
    long_ = np.abs(gaps - (1 + 1 / s) / nu_s) <= 1e-9
    assert np.all(short ^ long_)
    assert np.all(gaps > 0)
    # the floor terms telescope, so the window mean is off by < 1/(s*nu_s*N)
    n = gaps.size
    assert abs(gaps.mean() - nu_s / s**2) <= 1 / (s * nu_s * n)
    far = np.diff(ps.chain_point(np.array([0, 10**7]), s))[0] / 10**7
    assert far == pytest.approx(nu_s / s**2, rel=1e-6)


def test_density():
    n = ps.enumerate_points(ps.Fibonacci(), 0.0, 1e4).size
    assert abs(n / 1e4 - G.tau**2 / G.nu) <= 1e-2


def test_field_hit_examples():
    assert ps.field_hit(ps.Periodic(1.0), 0.95, 0.2)
    assert not ps.field_hit(ps.Periodic(1.0), 0.3, 0.2)
    y = ps.fib_point(5) + 0.3
    assert not ps.field_hit(ps.Fibonacci(), y, 0.1)
    # brute force over the formula itself
    m = np.arange(-5, 20)
    xs = m / G.nu + np.floor(m / G.tau) / (G.tau * G.nu)
    near = np.min(np.abs(xs - y))
    assert near == pytest.approx(0.2257, abs=1e-4)
    assert ps.fib_point(6) - ps.fib_point(5) == pytest.approx(SHORT)


def test_field_hit_inclusive_boundary():
    # 0.5 and 0.25 are exact in binary, so the distance equals eps/2 exactly
    assert ps.field_hit(ps.Periodic(1.0), 0.25, 0.5)
    assert not ps.field_hit(ps.Periodic(1.0), 0.25 + 2**-40, 0.5)


def test_overlap_diagnostics():
    ps.reset_diagnostics()
    ps.field_hit(ps.Periodic(1.0), 0.3, 0.2)
    assert ps.diagnostics().get("overlapping_obstacles", 0) == 0
    assert ps.field_hit(ps.Periodic(1.0), 0.3, 1.5) in (True, False)
    assert ps.diagnostics()["overlapping_obstacles"] == 1
    with pytest.raises(ValueError):
        ps.field_hit(ps.Periodic(1.0), 0.3, 0.0)


def test_nearest_distance_examples():
    assert ps.nearest_distance(ps.Periodic(0.5), 1.2) == pytest.approx(0.2, abs=1e-15)
    assert ps.nearest_distance(ps.Fibonacci(), G.nu) <= 4e-16


def test_nearest_matches_brute_force(any_field, rng):
    fld = any_field
    gap = 1 / fld.density
    y = rng.uniform(-3000 * gap, 3000 * gap, 10**4)
    pts = ps.enumerate_points(fld, y.min() - 10 * gap, y.max() + 10 * gap)
    # brute force over a +-5 mean gap window around each query
    lo = np.searchsorted(pts, y - 5 * gap)
    hi = np.searchsorted(pts, y + 5 * gap)
    width = int((hi - lo).max())
    idx = np.clip(lo[:, None] + np.arange(width)[None, :], 0, pts.size - 1)
    cand = np.where(np.arange(width)[None, :] < (hi - lo)[:, None], np.abs(y[:, None] - pts[idx]), np.inf)
    brute = cand.min(axis=1)
    ok = np.isfinite(brute)
    assert ok.mean() > 0.99
    assert np.array_equal(ps.nearest_distance(fld, y)[ok], brute[ok])


def test_poisson_window_oracle(rng):
    fld = ps.matched_poisson(seed=77)
    r = 5 / fld.intensity
    for y in rng.uniform(-100, 100, 200):
        pts = ps.enumerate_points(fld, y - r, y + r)
        if pts.size:
            assert ps.nearest_distance(fld, y) == np.min(np.abs(pts - y))


def test_poisson_order_independent(rng):
    fld = ps.matched_poisson(seed=3)
    y = rng.uniform(-500, 500, 10**4)
    base = ps.field_hit(fld, y, 0.05)
    for _ in range(3):
        perm = rng.permutation(y.size)
        assert np.array_equal(ps.field_hit(fld, y[perm], 0.05), base[perm])
    singles = np.array([ps.field_hit(fld, v, 0.05) for v in y[:300][::-1]])
    assert np.array_equal(singles[::-1], base[:300])


def test_poisson_count_concentration():
    for seed in (1, 2, 3):
        fld = ps.matched_poisson(seed=seed)
        n = ps.enumerate_points(fld, 0.0, 1e4).size
        mean = fld.intensity * 1e4
        assert abs(n - mean) <= 3 * math.sqrt(mean)


def test_poisson_realization_fixed_by_parameters():
    a = ps.enumerate_points(ps.Poisson(2.0, seed=5), -50, 50)
    b = ps.enumerate_points(ps.Poisson(2.0, seed=5), -50, 50)
    c = ps.enumerate_points(ps.Poisson(2.0, seed=6), -50, 50)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_enumerate_points_examples():
    assert ps.enumerate_points(ps.Periodic(1.0), 0, 3).tolist() == [0.0, 1.0, 2.0]
    fib = ps.enumerate_points(ps.Fibonacci(), 0, 2)
    assert fib == pytest.approx([0.0, 0.5257311, 1.3763819, 1.9021130], abs=1e-7)


def test_enumerate_points_sorted_unique(any_field):
    x = ps.enumerate_points(any_field, -37.5, 81.25)
    assert np.all(np.diff(x) > 0)
    assert x.min() >= -37.5 and x.max() < 81.25


def test_enumerate_limits():
    with pytest.raises(ResourceLimitError):
        ps.enumerate_points(ps.Periodic(1e-3), 0, 1e6)
    with pytest.raises(ValueError):
        ps.enumerate_points(ps.Periodic(1.0), 3, 3)


@given(k=st.integers(-8, 8), y=st.floats(-1e4, 1e4), s=st.floats(0.01, 100))
def test_periodic_scaling_covariance(k, y, s):
    c = 2.0**k
    assert ps.nearest_distance(ps.Periodic(c * s), c * y) == c * ps.nearest_distance(ps.Periodic(s), y)


def test_fields_are_immutable():
    f = ps.Poisson(1.0, seed=1)
    with pytest.raises(Exception):
        f.seed = 2
    assert ps.Fibonacci() == ps.Fibonacci()
    assert hash(ps.Periodic(1.0)) == hash(ps.Periodic(1.0))
