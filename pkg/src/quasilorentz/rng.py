"""Counter-based uniform variates.

Every draw is a pure function of ``(seed, counter, stream)``: a SplitMix64
finaliser chained over the three words.  Nothing is stateful, so trajectory
``i`` gets the same ``(q0, v)`` whatever order or thread it is evaluated on,
and a Poisson cell is realised identically no matter who asks for it.

The numba kernels carry a scalar copy of the same mixing (see
``kernels_numba``); ``tests/test_rng.py`` pins the two together.
"""

import numpy as np

GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV_2_53 = 1.0 / 9007199254740992.0

#: stream ids used by the simulator
STREAM_Q0 = 0
STREAM_V = 1


def as_u64(x):
    """Reinterpret (possibly negative) 64-bit integers as uint64, two's complement."""
    if isinstance(x, (int, np.integer)):
        return np.uint64(int(x) & 0xFFFFFFFFFFFFFFFF)
    a = np.asarray(x)
    if a.dtype == np.uint64:
        return a
    return a.astype(np.int64).view(np.uint64)


def splitmix64(z):
    with np.errstate(over="ignore"):
        z = z + GOLDEN_GAMMA
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
        return z ^ (z >> _S31)


def hash3(seed, counter, stream):
    """64-bit hash of three words; vectorised over ``counter`` and ``stream``."""
    h = splitmix64(as_u64(seed))
    h = splitmix64(h ^ as_u64(counter))
    return splitmix64(h ^ as_u64(stream))


def uniform(seed, counter, stream):
    """Uniform variate on ``[0, 1)`` with 53 random bits."""
    h = hash3(seed, counter, stream)
    return (h >> _S11).astype(np.float64) * _INV_2_53
