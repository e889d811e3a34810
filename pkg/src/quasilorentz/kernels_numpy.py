"""Pure-numpy first-hit search, vectorised across trajectories.

Same obstacle walk as :mod:`quasilorentz.kernels_numba`: each round advances
every unfinished trajectory by one obstacle (one cell for Poisson fields).
Results agree bit for bit with the numba path.
"""

import numpy as np

from . import pointsets as ps


def _first_j(x, q0, v, half, cap):
    jf = np.ceil((x - half - q0) / v)
    out_of_reach = jf > cap + 2.0
    jc = np.where(out_of_reach, 1.0, np.maximum(jf, 1.0)).astype(np.int64)
    while True:
        down = (jc > 1) & (np.abs(q0 + (jc - 1) * v - x) <= half) & ~out_of_reach
        if not down.any():
            break
        jc -= down
    while True:
        up = (x - (q0 + jc * v) > half) & ~out_of_reach
        if not up.any():
            break
        jc += up
    hit = (np.abs(q0 + jc * v - x) <= half) & ~out_of_reach
    return np.where(hit, jc, 0)


def first_hits(q0s, vs, eps, cap, fld):
    q0s = np.asarray(q0s, dtype=np.float64)
    vs = np.asarray(vs, dtype=np.float64)
    half = eps / 2.0
    kind, a, b, c, _, _ = ps.kernel_args(fld)
    n = q0s.size
    best = np.full(n, cap + 1, dtype=np.int64)
    limit = q0s + cap * vs
    start = q0s + vs - half
    if kind == ps.KIND_CHAIN:
        ptr = np.floor(start * (a * a / b)).astype(np.int64) - 3
    else:
        ptr = np.floor(start / a).astype(np.int64) - 1
    active = np.arange(n)

    while active.size:
        q0, v, p = q0s[active], vs[active], ptr[active]
        if kind == ps.KIND_CHAIN:
            x = ps._chain_x(p, a, b, c)
            live = ~(x - half > limit[active])
            idx = active[live]
            j = _first_j(x[live], q0[live], v[live], half, cap)
            _update(best, limit, q0s, vs, idx, j)
        elif kind == ps.KIND_PERIODIC:
            x = p * a
            live = ~(x - half > limit[active])
            idx = active[live]
            j = _first_j(x[live], q0[live], v[live], half, cap)
            _update(best, limit, q0s, vs, idx, j)
        else:
            live = p * a - half <= limit[active]
            idx = active[live]
            owner, x = ps.poisson_cell_points(fld, p[live])
            tidx = idx[owner]
            # points beyond the current limit cannot improve on best
            j = _first_j(x, q0s[tidx], vs[tidx], half, cap)
            j = np.where(x - half > limit[tidx], 0, j)
            _update_many(best, limit, q0s, vs, tidx, j)
        ptr[idx] += 1
        active = idx
    return np.where(best <= cap, best, 0)


def _update(best, limit, q0s, vs, idx, j):
    better = (j > 0) & (j < best[idx])
    tgt = idx[better]
    best[tgt] = j[better]
    limit[tgt] = q0s[tgt] + (best[tgt] - 1) * vs[tgt]


def _update_many(best, limit, q0s, vs, tidx, j):
    hit = j > 0
    if not hit.any():
        return
    np.minimum.at(best, tidx[hit], j[hit])
    tgt = np.unique(tidx[hit])
    limit[tgt] = q0s[tgt] + (best[tgt] - 1) * vs[tgt]
