"""Hot numeric kernels, jitted with numba and backed by numpy fallbacks.

The jitted path is used when numba imports cleanly and the environment
variable GGTLAB_NO_NUMBA is unset/empty; the fallback path is plain
vectorized numpy (plus short python loops where the algorithm is
inherently sequential).  Both paths perform the same floating-point
operations in the same order, so results agree bitwise; the tests assert
that and benchmarks/bench_kernels.py times the two side by side.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_requested() -> bool:
    return not os.environ.get("GGTLAB_NO_NUMBA")


try:
    from numba import njit as _njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via GGTLAB_NO_NUMBA instead
    _HAVE_NUMBA = False

    def _njit(*args, **kwargs):
        def deco(f):
            return f

        return deco if not (args and callable(args[0])) else args[0]


USING_NUMBA = _HAVE_NUMBA and _numba_requested()


def using_numba() -> bool:
    return USING_NUMBA


# ---------------------------------------------------------------------------
# loop bodies (jitted when numba is active)


def _max_stretch_loop(d):
    n = d.shape[0]
    best = 1.0
    for x in range(n):
        for z in range(n):
            if x == z:
                continue
            denom = np.inf
            for y in range(n):
                if y == x or y == z:
                    continue
                s = d[x, y] + d[y, z]
                if s < denom:
                    denom = s
            if denom < np.inf:
                ratio = d[x, z] / denom
                if ratio > best:
                    best = ratio
    return best


def _ultrametric_defect_loop(d):
    n = d.shape[0]
    best = -np.inf
    for x in range(n):
        for z in range(n):
            row = d[x, z]
            for y in range(n):
                m = d[x, y] if d[x, y] >= d[y, z] else d[y, z]
                diff = row - m
                if diff > best:
                    best = diff
    return best


def _floyd_warshall_loop(w):
    rho = w.copy()
    n = rho.shape[0]
    for k in range(n):
        for i in range(n):
            dik = rho[i, k]
            for j in range(n):
                alt = dik + rho[k, j]
                if alt < rho[i, j]:
                    rho[i, j] = alt
    return rho


def _greedy_cover_loop(d, members, seed, radius):
    m = members.shape[0]
    chosen = np.empty(m, dtype=np.int64)
    count = 0
    covered = np.zeros(m, dtype=np.bool_)
    # selection metric: distance to the chosen set; the seed only steers
    # the first pick and is not itself a phantom center
    mindist = np.empty(m, dtype=np.float64)
    for i in range(m):
        mindist[i] = d[members[i], seed]
    while True:
        pick = -1
        best = -1.0
        done = True
        for i in range(m):
            if covered[i]:
                continue
            done = False
            if mindist[i] > best:
                best = mindist[i]
                pick = i
        if done:
            break
        chosen[count] = members[pick]
        count += 1
        for i in range(m):
            dist = d[members[i], members[pick]]
            if dist < radius:
                covered[i] = True
            if count == 1 or dist < mindist[i]:
                mindist[i] = dist
    return chosen[:count]


def _pairwise_prefix_loop(wmat):
    n, depth = wmat.shape
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            t = 0
            while t < depth and wmat[i, t] == wmat[j, t]:
                t += 1
            out[i, j] = t
    return out


# ---------------------------------------------------------------------------
# numpy fallbacks


def _max_stretch_numpy(d):
    n = d.shape[0]
    if n <= 2:
        return 1.0
    denom = np.full((n, n), np.inf)
    for y in range(n):
        s = d[:, y][:, None] + d[y, :][None, :]
        s[y, :] = np.inf
        s[:, y] = np.inf
        np.minimum(denom, s, out=denom)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(denom < np.inf, d / denom, 0.0)
    np.fill_diagonal(ratio, 0.0)
    return float(max(ratio.max(), 1.0))


def _ultrametric_defect_numpy(d):
    n = d.shape[0]
    best = -np.inf
    for y in range(n):
        m = np.maximum(d[:, y][:, None], d[y, :][None, :])
        best = max(best, float((d - m).max()))
    return best


def _floyd_warshall_numpy(w):
    rho = w.copy()
    n = rho.shape[0]
    for k in range(n):
        np.minimum(rho, rho[:, k][:, None] + rho[k, :][None, :], out=rho)
    return rho


def _greedy_cover_numpy(d, members, seed, radius):
    chosen = []
    covered = np.zeros(len(members), dtype=bool)
    mindist = d[members, seed].astype(np.float64, copy=True)
    masked = np.empty_like(mindist)
    while not covered.all():
        np.copyto(masked, mindist)
        masked[covered] = -np.inf
        pick = int(np.argmax(masked))
        chosen.append(int(members[pick]))
        dists = d[members, members[pick]]
        covered |= dists < radius
        if len(chosen) == 1:
            mindist = dists.astype(np.float64, copy=True)
        else:
            np.minimum(mindist, dists, out=mindist)
    return np.asarray(chosen, dtype=np.int64)


def _pairwise_prefix_numpy(wmat):
    n, depth = wmat.shape
    out = np.zeros((n, n), dtype=np.int64)
    alive = np.ones((n, n), dtype=bool)
    for t in range(depth):
        col = wmat[:, t]
        alive &= col[:, None] == col[None, :]
        out += alive
    return out


# ---------------------------------------------------------------------------
# selection

max_stretch_numpy = _max_stretch_numpy
ultrametric_defect_numpy = _ultrametric_defect_numpy
floyd_warshall_numpy = _floyd_warshall_numpy
greedy_cover_numpy = _greedy_cover_numpy
pairwise_prefix_numpy = _pairwise_prefix_numpy

if USING_NUMBA:
    max_stretch_numba = _njit(cache=True)(_max_stretch_loop)
    ultrametric_defect_numba = _njit(cache=True)(_ultrametric_defect_loop)
    floyd_warshall_numba = _njit(cache=True)(_floyd_warshall_loop)
    greedy_cover_numba = _njit(cache=True)(_greedy_cover_loop)
    pairwise_prefix_numba = _njit(cache=True)(_pairwise_prefix_loop)

    max_stretch = max_stretch_numba
    ultrametric_defect = ultrametric_defect_numba
    floyd_warshall = floyd_warshall_numba
    greedy_cover = greedy_cover_numba
    pairwise_prefix = pairwise_prefix_numba
else:
    max_stretch_numba = None
    ultrametric_defect_numba = None
    floyd_warshall_numba = None
    greedy_cover_numba = None
    pairwise_prefix_numba = None

    max_stretch = max_stretch_numpy
    ultrametric_defect = ultrametric_defect_numpy
    floyd_warshall = floyd_warshall_numpy
    greedy_cover = greedy_cover_numpy
    pairwise_prefix = pairwise_prefix_numpy


def warmup() -> None:
    """Trigger JIT compilation on tiny inputs so first real calls run hot."""
    d = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]])
    members = np.arange(3, dtype=np.int64)
    wmat = np.array([[1, 2], [1, 3], [2, 2]], dtype=np.int64)
    max_stretch(d)
    ultrametric_defect(d)
    floyd_warshall(d)
    greedy_cover(d, members, 0, 1.0)
    pairwise_prefix(wmat)
