"""Numba kernels for the first-hit search.

Instead of testing every jump ``q0 + j*v`` the search walks the obstacles in
increasing order and, for each, solves for the smallest jump index landing
within ``eps/2`` of it.  Cost per trajectory is the number of obstacles
passed (``<= k`` since ``v`` never exceeds the mean gap) and the answer is
identical to the step-by-step definition because ``q0 + j*v`` is monotone in
``j`` in floating point too.

Imported only when numba is enabled; see :mod:`quasilorentz._accel`.
"""

import math

import numpy as np
from numba import njit

from .pointsets import KIND_CHAIN, KIND_PERIODIC

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / 9007199254740992.0


@njit(inline="always")
def _splitmix64(z):
    z = z + _GAMMA
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(inline="always")
def _uniform(seed, counter, stream):
    h = _splitmix64(seed)
    h = _splitmix64(h ^ np.uint64(counter))
    h = _splitmix64(h ^ np.uint64(stream))
    return np.float64(h >> np.uint64(11)) * _INV_2_53


@njit(cache=True)
def uniform_scalar(seed, counter, stream):
    """Scalar twin of :func:`quasilorentz.rng.uniform` (used by tests)."""
    return _uniform(seed, counter, stream)


@njit(inline="always")
def _chain_x(m, slope, nu_s, snu):
    return m / nu_s + math.floor(m / slope) / snu


@njit(inline="always")
def _poisson_fill(buf, c, w, lam, e0, seed, kmax):
    """Write the sorted points of cell ``c`` into ``buf``; return their count."""
    u = _uniform(seed, c, 0)
    p = e0
    cdf = e0
    k = 0
    while u > cdf and k < kmax:
        k += 1
        p = p * lam / k
        cdf = cdf + p
    for i in range(k):
        x = (c + _uniform(seed, c, i + 1)) * w
        j = i
        while j > 0 and buf[j - 1] > x:
            buf[j] = buf[j - 1]
            j -= 1
        buf[j] = x
    return k


@njit(inline="always")
def _first_j(x, q0, v, half, cap):
    """Smallest ``j >= 1`` with ``|q0 + j*v - x| <= half``, or 0."""
    jf = math.ceil((x - half - q0) / v)
    if jf > cap + 2.0:
        return 0
    jc = 1 if jf < 1.0 else np.int64(jf)
    while jc > 1 and abs(q0 + (jc - 1) * v - x) <= half:
        jc -= 1
    while x - (q0 + jc * v) > half:
        jc += 1
    if abs(q0 + jc * v - x) <= half:
        return jc
    return 0


@njit(cache=True)
def _first_hit(q0, v, half, cap, kind, a, b, c, seed, kmax, buf):
    best = cap + 1
    limit = q0 + cap * v
    start = q0 + v - half
    if kind == KIND_CHAIN:
        dens = a * a / b
        m = np.int64(math.floor(start * dens)) - 3
        while True:
            x = _chain_x(m, a, b, c)
            if x - half > limit:
                break
            j = _first_j(x, q0, v, half, cap)
            if j > 0 and j < best:
                best = j
                limit = q0 + (best - 1) * v
            m += 1
    elif kind == KIND_PERIODIC:
        n = np.int64(math.floor(start / a)) - 1
        while True:
            x = n * a
            if x - half > limit:
                break
            j = _first_j(x, q0, v, half, cap)
            if j > 0 and j < best:
                best = j
                limit = q0 + (best - 1) * v
            n += 1
    else:
        cell = np.int64(math.floor(start / a)) - 1
        while cell * a - half <= limit:
            cnt = _poisson_fill(buf, cell, a, b, c, seed, kmax)
            for i in range(cnt):
                x = buf[i]
                if x - half > limit:
                    break
                j = _first_j(x, q0, v, half, cap)
                if j > 0 and j < best:
                    best = j
                    limit = q0 + (best - 1) * v
            cell += 1
    return best if best <= cap else 0


@njit(cache=True, nogil=True)
def first_hits(q0s, vs, eps, cap, kind, a, b, c, seed, kmax, out):
    """Fill ``out[i]`` with the hitting step of trajectory ``i`` (0 = censored)."""
    half = eps / 2.0
    buf = np.empty(max(kmax, 1), dtype=np.float64)
    for i in range(q0s.size):
        out[i] = _first_hit(q0s[i], vs[i], half, cap, kind, a, b, c, seed, kmax, buf)
