import math

import numpy as np
import pytest

from quasilorentz import stats
from quasilorentz.errors import InsufficientDataError


def hist_of(ks, cap):
    return np.bincount(np.asarray(ks, dtype=np.int64), minlength=cap + 1)


def naive_survival(steps, eps, thresholds):
    """Direct recount: censored (0) survives everything."""
    out = []
    for t in thresholds:
        out.append(sum(1 for k in steps if k == 0 or eps * k >= t))
    return np.array(out)


def synthetic_curve(fn, t):
    s = fn(t)
    return stats.SurvivalCurve(t, s, np.zeros(t.size, dtype=np.int64), 1, 1.0, "synthetic", float(t[-1]))


def test_examples():
    c = stats.survival_from_steps(hist_of([1, 2, 3, 4], 4), 0, 1.0, [2.5])
    assert c.survival[0] == 0.5 and c.count_ge[0] == 2
    c = stats.survival_from_steps(np.zeros(11, dtype=np.int64), 7, 0.1, [0.05, 0.5, 1.0])
    assert c.survival.tolist() == [1.0, 1.0, 1.0]


def test_threshold_beyond_censor_limit():
    with pytest.raises(ValueError, match="T=1.5"):
        stats.survival_from_steps(hist_of([1, 2], 10), 0, 0.1, [0.5, 1.5])


def test_matches_naive_recount(rng):
    for _ in range(200):
        cap = int(rng.integers(1, 300))
        eps = float(rng.choice([1e-3, 0.01, 0.1, 0.3, 1.0]))
        steps = rng.integers(0, cap + 1, size=int(rng.integers(1, 400)))
        t = np.sort(rng.uniform(0, eps * cap, 20))
        t = np.unique(np.concatenate([t, eps * rng.integers(1, cap + 1, 5)]))
        t = t[t <= eps * cap]
        c = stats.survival_from_steps(hist_of(steps[steps > 0], cap), int((steps == 0).sum()), eps, t)
        assert np.array_equal(c.count_ge, naive_survival(steps, eps, t))
        assert np.array_equal(c.survival, c.count_ge / steps.size)


def test_invariants(rng):
    cap = 500
    steps = rng.integers(0, cap + 1, size=1000)
    hist = hist_of(steps[steps > 0], cap)
    cens = int((steps == 0).sum())
    t = stats.default_thresholds(0.01, 5.0, 64)
    c = stats.survival_from_steps(hist, cens, 0.01, t)
    assert np.all(np.diff(c.survival) <= 0)
    assert np.all((c.survival >= 0) & (c.survival <= 1))
    assert np.array_equal(c.survival * c.n, c.count_ge.astype(float))
    # at T = eps*cap only censored runs and Hit(cap) survive
    edge = stats.survival_from_steps(hist, cens, 0.01, [0.01 * cap])
    assert edge.count_ge[0] == cens + hist[cap]


def test_default_thresholds():
    assert stats.default_thresholds(1, 100, 3) == pytest.approx([1, 10, 100], rel=1e-15)
    t = stats.default_thresholds(0.1, 10, 5)
    assert t[1:] / t[:-1] == pytest.approx(np.full(4, math.sqrt(10)), rel=1e-13)
    assert t[0] == 0.1 and t[-1] == 10
    for bad in [(1, 1, 3), (0, 1, 3), (2, 1, 3), (1, 2, 1)]:
        with pytest.raises(ValueError):
            stats.default_thresholds(*bad)
    g = stats.default_grid(50.0)
    assert g.size == 64 and g[0] == 0.05 and g[-1] == 40.0
    assert all(float(f"{x:.15g}") == x for x in g)


def test_power_fit_recovers_planted():
    t = stats.default_thresholds(0.5, 50, 40)
    f = stats.fit_power_tail(synthetic_curve(lambda x: 0.5 / x, t), (0.5, 50))
    assert f.param == pytest.approx(-1.0, rel=1e-6)
    assert f.prefactor == pytest.approx(0.5, rel=1e-6)
    assert f.rms_residual < 1e-12
    assert f.model == "power_law"


def test_exponential_fit_recovers_planted():
    t = np.linspace(0.1, 5, 30)
    f = stats.fit_exponential_tail(synthetic_curve(lambda x: np.exp(-2 * x), t), (0.1, 5))
    assert f.param == pytest.approx(2.0, rel=1e-6)
    assert f.prefactor == pytest.approx(1.0, rel=1e-6)
    assert f.rms_residual < 1e-12


def test_model_mismatch_direction():
    t = np.linspace(1, 10, 40)
    exp_curve = synthetic_curve(lambda x: np.exp(-x), t)
    assert stats.fit_power_tail(exp_curve, (1, 10)).rms_residual > 10 * max(
        stats.fit_exponential_tail(exp_curve, (1, 10)).rms_residual, 1e-12
    )
    pow_curve = synthetic_curve(lambda x: 1 / x, t)
    assert stats.fit_exponential_tail(pow_curve, (1, 10)).rms_residual > 10 * max(
        stats.fit_power_tail(pow_curve, (1, 10)).rms_residual, 1e-12
    )


def test_fit_drops_zeros_and_needs_points():
    t = np.linspace(1, 10, 10)
    s = 1 / t
    s[-3:] = 0
    c = stats.SurvivalCurve(t, s, np.zeros(10, dtype=np.int64), 1, 1.0, "x", 10.0)
    f = stats.fit_power_tail(c, (1, 10))
    assert f.dropped_zero == 3 and f.n_points == 7
    assert f.param == pytest.approx(-1.0)
    with pytest.raises(InsufficientDataError):
        stats.fit_power_tail(c, (7.5, 10))
    with pytest.raises(ValueError):
        stats.fit_power_tail(c, (1, 11))
    with pytest.raises(ValueError):
        stats.fit_exponential_tail(c, (5, 5))


def test_sup_distance():
    t = stats.default_thresholds(0.1, 10, 20)
    a = synthetic_curve(lambda x: 0.8 / (1 + x), t)
    b = synthetic_curve(lambda x: 0.8 / (1 + x) + 0.1, t)
    assert stats.curve_sup_distance(a, a, 0.5) == 0.0
    assert stats.curve_sup_distance(a, b, 0.5) == pytest.approx(0.1)
    other = synthetic_curve(lambda x: 0.8 / (1 + x), stats.default_thresholds(0.1, 10, 21))
    with pytest.raises(ValueError):
        stats.curve_sup_distance(a, other, 0.5)
