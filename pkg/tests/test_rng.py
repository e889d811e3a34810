import numpy as np
import pytest
from scipy import stats as sps

from quasilorentz import rng
from quasilorentz._accel import NUMBA_AVAILABLE


def test_pure_function_of_counter():
    a = rng.uniform(99, np.arange(-5, 1000), 3)
    b = np.array([rng.uniform(99, i, 3) for i in range(-5, 1000)])
    assert np.array_equal(a, b)
    assert np.array_equal(rng.uniform(99, np.arange(50)[::-1], 3), a[5:55][::-1])


def test_range_and_streams():
    u = rng.uniform(1, np.arange(10**5), 0)
    assert u.min() >= 0.0 and u.max() < 1.0
    assert not np.array_equal(u, rng.uniform(1, np.arange(10**5), 1))
    assert not np.array_equal(u, rng.uniform(2, np.arange(10**5), 0))


def test_uniformity_ks():
    u = rng.uniform(7, np.arange(10**5), 0)
    assert sps.kstest(u, "uniform").statistic <= 0.01


def test_negative_counters_are_twos_complement():
    assert rng.uniform(3, -1, 0) == rng.uniform(3, np.array([-1]), 0)[0]
    assert rng.uniform(3, -1, 0) == rng.uniform(3, 2**64 - 1, 0)


@pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba disabled")
def test_numba_twin_matches():
    from quasilorentz.kernels_numba import uniform_scalar

    for seed in (0, 1, 2**63 + 5, 2**64 - 1):
        for counter in (-(2**40), -3, 0, 7, 2**40):
            for stream in (0, 1, 9):
                assert uniform_scalar(np.uint64(seed), counter, stream) == rng.uniform(seed, counter, stream)
