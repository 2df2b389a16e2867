"""Depth-n approximations of the space at infinity of a free group.

A direction to infinity in a rank-k free group is approximated by the
reduced word of length n it starts with, so the depth-n boundary stand-in
is the set of all 2k(2k-1)^(n-1) reduced words of that exact length,
each identified with a cylinder of rays.  Distances come from a
one-parameter family: exp(-eps * shared prefix length), which is an
ultrametric for every eps > 0, and raising eps just takes pointwise
powers of one fixed distance.  The uniform weight on depth-n points is
the normalized cylinder counting measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from string import ascii_lowercase

import numpy as np

from . import _kernels
from .errors import BudgetError, InputError
from .quasimetric import PointCloud
from .words import Alphabet, Word, serialize, words_by_exact_length


class TooLargeError(BudgetError):
    def __init__(self, count: int, limit: int):
        super().__init__(f"boundary approximation needs {count} points, limit {limit}")
        self.count = count
        self.limit = limit


class DepthMismatchError(InputError):
    pass


def boundary_size(rank: int, depth: int) -> int:
    return 2 * rank * (2 * rank - 1) ** (depth - 1)


@dataclass(frozen=True)
class BoundaryApprox:
    rank: int
    depth: int
    points: tuple[Word, ...]

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(ascii_lowercase[: self.rank])

    def labels(self) -> tuple[str, ...]:
        alphabet = self.alphabet
        return tuple(serialize(w, alphabet) for w in self.points)


@dataclass(frozen=True)
class VisualQuasimetric:
    epsilon: float

    def __post_init__(self):
        if self.epsilon <= 0:
            raise InputError("epsilon must be positive")


def boundary_approx(rank: int, depth: int, max_points: int = 200_000) -> BoundaryApprox:
    """All reduced words of exactly the given length, lexicographic order."""
    if rank < 1 or rank > 26:
        raise InputError("rank must be between 1 and 26")
    if depth < 1:
        raise InputError("depth must be at least 1")
    count = boundary_size(rank, depth)
    if count > max_points:
        raise TooLargeError(count, max_points)
    alphabet = Alphabet(ascii_lowercase[:rank])
    points = tuple(words_by_exact_length(alphabet, depth))
    return BoundaryApprox(rank, depth, points)


def common_prefix(xi: Word, eta: Word) -> int:
    """Longest shared prefix of two same-depth reduced words."""
    if len(xi) != len(eta):
        raise DepthMismatchError(f"depths differ: {len(xi)} vs {len(eta)}")
    p = 0
    for a, b in zip(xi, eta):
        if a != b:
            break
        p += 1
    return p


def visual_distance(v: VisualQuasimetric, xi: Word, eta: Word) -> float:
    """exp(-eps * prefix length), zero exactly on equal points."""
    p = common_prefix(xi, eta)
    if p == len(xi):
        return 0.0
    return math.exp(-v.epsilon * p)


def boundary_cloud(
    b: BoundaryApprox, v: VisualQuasimetric, max_points: int = 5000
) -> PointCloud:
    """Point cloud of the depth-n boundary under the visual distance.

    Weights are the uniform cylinder measure 1/|points|; labels are the
    serialized words.
    """
    n = len(b.points)
    if n > max_points:
        raise TooLargeError(n, max_points)
    wmat = np.asarray(b.points, dtype=np.int64).reshape(n, b.depth)
    prefixes = np.asarray(_kernels.pairwise_prefix(wmat))
    d = np.exp(-v.epsilon * prefixes.astype(np.float64))
    np.fill_diagonal(d, 0.0)
    weights = np.full(n, 1.0 / n)
    return PointCloud(d, weights=weights, labels=b.labels())


@dataclass(frozen=True)
class ElementaryReport:
    rank: int
    elementary: bool
    point_counts: tuple[tuple[int, int], ...]  # (depth, count) samples

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "classification": "elementary" if self.elementary else "non-elementary",
            "point_counts": [list(pair) for pair in self.point_counts],
        }


def elementary_check(rank: int, depths: tuple[int, ...] = (1, 2, 3, 4)) -> ElementaryReport:
    """Two boundary points at every depth means elementary; that is rank 1.

    For rank >= 2 the counts start at 4 and grow geometrically, which is
    the finite-depth shadow of a Cantor set.
    """
    if rank < 1:
        raise InputError("rank must be at least 1")
    counts = tuple((n, boundary_size(rank, n)) for n in depths)
    return ElementaryReport(rank, all(c == 2 for _, c in counts), counts)
