"""The jitted kernels and their numpy fallbacks must agree exactly."""

import numpy as np
import pytest

from ggtlab import _kernels


def random_dist(n, rng, squared=False):
    pts = rng.uniform(0, 1, size=(n, 3))
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
    d = np.maximum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return d**2 if squared else d


pairs = [
    ("max_stretch", lambda d: (d,)),
    ("ultrametric_defect", lambda d: (d,)),
    ("floyd_warshall", lambda d: (d,)),
    (
        "greedy_cover",
        lambda d: (d, np.arange(d.shape[0], dtype=np.int64), 0, 0.3),
    ),
]


@pytest.mark.skipif(not _kernels.using_numba(), reason="numba disabled")
@pytest.mark.parametrize("name,make_args", pairs)
def test_numba_matches_numpy(name, make_args):
    rng = np.random.default_rng(7)
    for n in (1, 2, 3, 8, 30):
        d = random_dist(n, rng, squared=(n % 2 == 0))
        args = make_args(d)
        jitted = getattr(_kernels, f"{name}_numba")(*args)
        plain = getattr(_kernels, f"{name}_numpy")(*args)
        assert np.array_equal(np.asarray(jitted), np.asarray(plain)), (name, n)


@pytest.mark.skipif(not _kernels.using_numba(), reason="numba disabled")
def test_prefix_kernel_matches():
    rng = np.random.default_rng(11)
    wmat = rng.integers(-2, 3, size=(40, 6)).astype(np.int64)
    assert np.array_equal(
        _kernels.pairwise_prefix_numba(wmat), _kernels.pairwise_prefix_numpy(wmat)
    )


def test_max_stretch_brute():
    rng = np.random.default_rng(3)
    d = random_dist(12, rng, squared=True)
    best = 1.0
    n = d.shape[0]
    for x in range(n):
        for z in range(n):
            for y in range(n):
                if len({x, y, z}) == 3:
                    best = max(best, d[x, z] / (d[x, y] + d[y, z]))
    assert _kernels.max_stretch(d) == pytest.approx(best, rel=0, abs=0)


def test_floyd_warshall_brute():
    rng = np.random.default_rng(5)
    d = random_dist(7, rng, squared=True)
    rho = np.asarray(_kernels.floyd_warshall(d))
    # full enumeration of simple chains on 7 points
    import itertools

    n = d.shape[0]
    for x in range(n):
        for y in range(n):
            best = d[x, y]
            others = [k for k in range(n) if k not in (x, y)]
            for r in range(1, 4):
                for mid in itertools.permutations(others, r):
                    chain = (x, *mid, y)
                    total = sum(d[a, b] for a, b in zip(chain, chain[1:]))
                    best = min(best, total)
            assert rho[x, y] <= best + 1e-12


def test_greedy_cover_covers():
    rng = np.random.default_rng(9)
    d = random_dist(25, rng)
    members = np.flatnonzero(d[0] < 0.8).astype(np.int64)
    centers = np.asarray(_kernels.greedy_cover(d, members, 0, 0.2))
    assert len(centers) >= 1
    assert np.all(d[np.ix_(members, centers)].min(axis=1) < 0.2)
    assert set(centers) <= set(members.tolist())


def test_env_flag_selects_fallback():
    import subprocess
    import sys

    code = (
        "import os; os.environ['GGTLAB_NO_NUMBA']='1'; "
        "from ggtlab import _kernels; "
        "assert not _kernels.using_numba(); "
        "assert _kernels.max_stretch is _kernels.max_stretch_numpy; "
        "print('fallback ok')"
    )
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, check=True
    )
    assert "fallback ok" in out.stdout
