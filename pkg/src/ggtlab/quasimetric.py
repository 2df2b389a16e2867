"""Finite point-cloud laboratory: quasimetric constants, snowflakes,
chain metrization, Lipschitz bounds, doubling estimates and box-count
dimension.

A cloud is a finite set of points given purely by its distance matrix
(symmetric, zero exactly on the diagonal) with optional positive point
weights acting as a measure.  Balls are open throughout: B(x, r) is
everything at distance strictly below r, and all covering and measure
code uses that strict inequality.  Cover centers are restricted to
cloud points, which keeps everything intrinsic and only inflates the
constants by a bounded factor.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import CheckFailure, InputError

CLOUD_SCHEMA = "ggtlab/point-cloud/1"


class InvariantViolationError(InputError):
    pass


class DegenerateGridError(InputError):
    pass


class DoublingIterationError(CheckFailure):
    def __init__(self, point: int, radius: float, level: int, count: int, bound: float):
        super().__init__(
            f"iterated doubling failed at x={point}, r={radius}, l={level}: "
            f"{count} balls > bound {bound}"
        )
        self.point = point
        self.radius = radius
        self.level = level
        self.count = count
        self.bound = bound


@dataclass
class PointCloud:
    dist: np.ndarray
    weights: Optional[np.ndarray] = None
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        self.dist = np.asarray(self.dist, dtype=np.float64)
        if self.weights is not None:
            self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.labels is not None:
            self.labels = tuple(self.labels)
        self.validate()

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def validate(self) -> None:
        d = self.dist
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise InvariantViolationError(f"distance matrix must be square, got {d.shape}")
        n = d.shape[0]
        if n == 0:
            raise InvariantViolationError("a cloud needs at least one point")
        if np.any(np.diagonal(d) != 0.0):
            raise InvariantViolationError("nonzero diagonal entry")
        if not np.array_equal(d, d.T):
            raise InvariantViolationError("asymmetric distance matrix")
        off = d[~np.eye(n, dtype=bool)]
        if off.size and (np.any(off <= 0.0) or not np.all(np.isfinite(off))):
            raise InvariantViolationError("off-diagonal distances must be positive and finite")
        if self.weights is not None:
            if self.weights.shape != (n,) or np.any(self.weights <= 0.0):
                raise InvariantViolationError("weights must be one positive value per point")
        if self.labels is not None and len(self.labels) != n:
            raise InvariantViolationError("label count does not match point count")

    @classmethod
    def from_coords(
        cls,
        coords,
        norm: float = 2.0,
        weights=None,
        labels: Optional[Sequence[str]] = None,
    ) -> "PointCloud":
        """Cloud of rows of `coords` under the given Minkowski norm."""
        pts = np.atleast_2d(np.asarray(coords, dtype=np.float64))
        if pts.shape[0] == 1 and pts.shape[1] > 1 and np.ndim(coords) == 1:
            pts = pts.T
        diff = np.abs(pts[:, None, :] - pts[None, :, :])
        if norm == math.inf:
            d = diff.max(axis=2)
        else:
            d = (diff**norm).sum(axis=2) ** (1.0 / norm)
        np.fill_diagonal(d, 0.0)
        d = np.maximum(d, d.T)  # exact symmetry
        return cls(d, weights=weights, labels=tuple(labels) if labels else None)

    def diameter(self) -> float:
        return float(self.dist.max())

    def min_gap(self) -> float:
        if self.n < 2:
            return 0.0
        off = self.dist[~np.eye(self.n, dtype=bool)]
        return float(off.min())


def quasimetric_constant(c: PointCloud) -> float:
    """Least C with d(x,z) <= C (d(x,y) + d(y,z)) over all triples; at least 1.

    With fewer than three points the relaxed triangle condition is
    vacuous and the constant is 1 by convention.
    """
    c.validate()
    if c.n <= 2:
        return 1.0
    return float(_kernels.max_stretch(c.dist))


def is_metric(c: PointCloud, tol: float = 1e-12) -> bool:
    return quasimetric_constant(c) <= 1.0 + tol


def snowflake(c: PointCloud, a: float) -> PointCloud:
    """The power transform d -> d^a; identity and symmetry survive any a > 0."""
    if a <= 0:
        raise InputError("snowflake exponent must be positive")
    return PointCloud(c.dist**a, weights=c.weights, labels=c.labels)


@dataclass(frozen=True)
class ChainMetrization:
    cloud: PointCloud
    c_prime: float
    delta: float
    epsilon: float


def chain_metrize(c: PointCloud, epsilon: Optional[float] = None) -> ChainMetrization:
    """Minimal chain-sum metric for the weight d^epsilon, with comparison constant.

    rho(x,y) is the cheapest total d^epsilon weight over chains from x
    to y (all-pairs shortest paths in the complete graph), hence a
    metric by construction.  Returns the least C' with
    C'^-1 rho^delta <= d <= C' rho^delta pairwise, where delta = 1/epsilon.
    When epsilon is omitted it is set to log 2 / log(2C), the classical
    regime in which chain sums stay comparable to the original.
    """
    c.validate()
    if epsilon is None:
        big_c = quasimetric_constant(c)
        epsilon = math.log(2.0) / math.log(2.0 * big_c)
    if epsilon <= 0:
        raise InputError("chain exponent must be positive")
    w = c.dist**epsilon
    rho = np.asarray(_kernels.floyd_warshall(w))
    rho = np.minimum(rho, rho.T)  # guard exact symmetry against fp drift
    delta = 1.0 / epsilon
    rho_cloud = PointCloud(rho, weights=c.weights, labels=c.labels)
    if c.n < 2:
        return ChainMetrization(rho_cloud, 1.0, delta, epsilon)
    mask = ~np.eye(c.n, dtype=bool)
    comp = rho[mask] ** delta
    orig = c.dist[mask]
    c_prime = float(max(np.max(orig / comp), np.max(comp / orig), 1.0))
    return ChainMetrization(rho_cloud, c_prime, delta, epsilon)


def lipschitz_constant(c: PointCloud, values) -> float:
    """Least L with |f(x) - f(y)| <= L d(x,y) over all pairs."""
    c.validate()
    f = np.asarray(values, dtype=np.float64)
    if c.n < 2:
        raise InputError("need at least two points for a Lipschitz constant")
    if f.shape != (c.n,):
        raise InputError("need one value per point")
    mask = ~np.eye(c.n, dtype=bool)
    return float(np.max(np.abs(f[:, None] - f[None, :])[mask] / c.dist[mask]))


# ---------------------------------------------------------------------------
# covering machinery


def dyadic_radii(c: PointCloud, max_count: int = 16) -> list[float]:
    """Dyadic fractions of the diameter, stopping below the minimal gap."""
    diam = c.diameter()
    if diam <= 0:
        raise DegenerateGridError("cloud has zero diameter")
    gap = c.min_gap()
    out = []
    r = diam / 2.0
    while len(out) < max_count and r >= gap:
        out.append(r)
        r /= 2.0
    if not out:
        out.append(diam / 2.0)
    return out


def _clean_radii(c: PointCloud, radii: Optional[Sequence[float]]) -> list[float]:
    if radii is None:
        return dyadic_radii(c)
    diam = c.diameter()
    gap = c.min_gap()
    kept = []
    dropped = []
    for r in radii:
        if r <= 0:
            raise InputError(f"radius {r} is not positive")
        if (diam > 0 and r > diam) or r < gap:
            dropped.append(r)
        else:
            kept.append(float(r))
    if dropped:
        warnings.warn(f"clipped degenerate radii {dropped}", stacklevel=3)
    if not kept:
        raise DegenerateGridError("no usable radii left after clipping")
    return kept


def _cover_ball(c: PointCloud, x: int, ball_radius: float, cover_radius: float) -> np.ndarray:
    """Greedy farthest-first cover of B(x, ball_radius) by cover_radius balls.

    Centers are cloud points inside the ball; the first pick is the
    member farthest from x, ties broken by index.  Verifies the cover.
    """
    members = np.flatnonzero(c.dist[x] < ball_radius).astype(np.int64)
    centers = np.asarray(_kernels.greedy_cover(c.dist, members, x, cover_radius))
    sub = c.dist[np.ix_(members, centers)]
    if not np.all(sub.min(axis=1) < cover_radius):
        raise CheckFailure(f"greedy cover failed verification at x={x}, r={ball_radius}")
    return centers


@dataclass(frozen=True)
class RadiusCover:
    radius: float
    worst_count: int
    worst_center: int
    centers: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "worst_count": self.worst_count,
            "worst_center": self.worst_center,
            "centers": list(self.centers),
        }


@dataclass(frozen=True)
class CoverReport:
    radii: tuple[float, ...]
    per_radius: tuple[RadiusCover, ...]
    constant: float

    def to_dict(self) -> dict:
        return {
            "radii": list(self.radii),
            "per_radius": [pr.to_dict() for pr in self.per_radius],
            "constant": self.constant,
        }


def doubling_constant_estimate(
    c: PointCloud, radii: Optional[Sequence[float]] = None
) -> CoverReport:
    """Worst half-radius cover count over all centers and grid radii.

    Every greedy cover is re-verified for containment before it is
    reported, so the constant is a true upper bound for the greedy
    scheme on this cloud.
    """
    c.validate()
    if c.n == 1:
        return CoverReport((), (), 1.0)
    grid = _clean_radii(c, radii)
    per = []
    overall = 1
    for r in grid:
        worst = (0, -1, ())
        for x in range(c.n):
            centers = _cover_ball(c, x, r, r / 2.0)
            if len(centers) > worst[0]:
                worst = (len(centers), x, tuple(int(i) for i in centers))
        per.append(RadiusCover(r, worst[0], worst[1], worst[2]))
        overall = max(overall, worst[0])
    return CoverReport(tuple(grid), tuple(per), float(overall))


def doubling_iterate_check(
    c: PointCloud, x: int, r: float, level: int, c1: float
) -> int:
    """Cover B(x, r) by radius r/2^level balls via recursive halving.

    Returns the leaf count and raises DoublingIterationError if it
    exceeds c1**level.
    """
    c.validate()
    if level < 1:
        raise InputError("level must be a positive integer")

    def recurse(center: int, radius: float, depth: int) -> int:
        centers = _cover_ball(c, center, radius, radius / 2.0)
        if depth == 1:
            return len(centers)
        return sum(recurse(int(y), radius / 2.0, depth - 1) for y in centers)

    count = recurse(x, r, level)
    bound = c1**level
    if count > bound:
        raise DoublingIterationError(x, r, level, count, bound)
    return count


@dataclass(frozen=True)
class MeasureDoublingReport:
    c2: float
    witness_point: int
    witness_radius: float
    radii: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "c2": self.c2,
            "witness_point": self.witness_point,
            "witness_radius": self.witness_radius,
            "radii": list(self.radii),
        }


def measure_doubling_check(
    c: PointCloud, radii: Optional[Sequence[float]] = None
) -> MeasureDoublingReport:
    """Largest mass ratio mu(B(x, 2r)) / mu(B(x, r)) over centers and radii.

    Without explicit weights the counting measure is used.  Balls always
    contain their center, so both masses are positive.
    """
    c.validate()
    if c.n == 1:
        return MeasureDoublingReport(1.0, 0, 0.0, ())
    weights = c.weights if c.weights is not None else np.ones(c.n)
    grid = _clean_radii(c, radii)
    best = (0.0, -1, 0.0)
    for r in grid:
        mu_r = ((c.dist < r) * weights[None, :]).sum(axis=1)
        mu_2r = ((c.dist < 2.0 * r) * weights[None, :]).sum(axis=1)
        ratios = mu_2r / mu_r
        x = int(np.argmax(ratios))
        if ratios[x] > best[0]:
            best = (float(ratios[x]), x, r)
    return MeasureDoublingReport(best[0], best[1], best[2], tuple(grid))


@dataclass(frozen=True)
class DimensionFit:
    radii: tuple[float, ...]
    cover_counts: tuple[int, ...]
    slope: float
    residual: float

    def to_dict(self) -> dict:
        return {
            "radii": list(self.radii),
            "cover_counts": list(self.cover_counts),
            "slope": self.slope,
            "residual": self.residual,
        }


def boxcount_dimension(
    c: PointCloud,
    radii: Optional[Sequence[float]] = None,
    octaves: int = 6,
) -> DimensionFit:
    """Slope of log(cover count) against log(1/r) on a geometric radius grid.

    The default grid is diam * 2^-k for k = 1..octaves.  Requires at
    least three radii spanning at least two octaves.  A single point has
    dimension zero by convention.
    """
    c.validate()
    if c.n == 1:
        return DimensionFit((), (), 0.0, 0.0)
    diam = c.diameter()
    if radii is None:
        grid = [diam * 2.0**-k for k in range(1, octaves + 1)]
    else:
        grid = [float(r) for r in radii]
        if any(r <= 0 for r in grid):
            raise InputError("radii must be positive")
    if len(grid) < 3 or max(grid) / min(grid) < 4.0:
        raise DegenerateGridError("need at least three radii spanning two octaves")
    everyone = np.arange(c.n, dtype=np.int64)
    counts = []
    for r in grid:
        centers = np.asarray(_kernels.greedy_cover(c.dist, everyone, 0, r))
        sub = c.dist[:, centers]
        if not np.all(sub.min(axis=1) < r):
            raise CheckFailure(f"box cover failed verification at r={r}")
        counts.append(len(centers))
    xs = np.log(1.0 / np.asarray(grid))
    ys = np.log(np.asarray(counts, dtype=np.float64))
    slope, intercept = np.polyfit(xs, ys, 1)
    residual = float(np.sqrt(np.mean((ys - (slope * xs + intercept)) ** 2)))
    return DimensionFit(tuple(grid), tuple(counts), float(slope), residual)


# ---------------------------------------------------------------------------
# cloud files: JSON (full or lower-triangle, optional weights/labels) and
# bare lower-triangle CSV


def cloud_to_dict(c: PointCloud) -> dict:
    doc = {
        "schema": CLOUD_SCHEMA,
        "n": c.n,
        "dist": [[float(c.dist[i, j]) for j in range(i)] for i in range(1, c.n)],
    }
    if c.weights is not None:
        doc["weights"] = [float(w) for w in c.weights]
    if c.labels is not None:
        doc["labels"] = list(c.labels)
    return doc


def cloud_from_dict(doc: dict) -> PointCloud:
    rows = doc["dist"]
    looks_square = (
        bool(rows)
        and all(len(row) == len(rows) for row in rows)
        and (len(rows) > 1 or rows[0][0] == 0.0)
    )
    if looks_square:
        d = np.asarray(rows, dtype=np.float64)
    else:
        n = len(rows) + 1
        d = np.zeros((n, n))
        for i, row in enumerate(rows, start=1):
            if len(row) != i:
                raise InputError(f"triangle row {i} has {len(row)} entries, expected {i}")
            for j, v in enumerate(row):
                d[i, j] = d[j, i] = v
    return PointCloud(
        d,
        weights=doc.get("weights"),
        labels=tuple(doc["labels"]) if doc.get("labels") else None,
    )


def save_cloud(c: PointCloud, path) -> None:
    path = str(path)
    if path.endswith(".csv"):
        with open(path, "w", encoding="utf-8") as fh:
            for i in range(1, c.n):
                fh.write(",".join(repr(float(c.dist[i, j])) for j in range(i)))
                fh.write("\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cloud_to_dict(c), fh, sort_keys=True)
        fh.write("\n")


def load_cloud(path) -> PointCloud:
    path = str(path)
    if path.endswith(".csv"):
        with open(path, "r", encoding="utf-8") as fh:
            rows = [
                [float(v) for v in line.strip().split(",") if v]
                for line in fh
                if line.strip()
            ]
        return cloud_from_dict({"dist": rows})
    with open(path, "r", encoding="utf-8") as fh:
        return cloud_from_dict(json.load(fh))
