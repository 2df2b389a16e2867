"""Cayley-graph balls and the word metric, computed by breadth-first search.

Vertices are group elements; two elements are adjacent when one is the
other times a generator or a generator inverse on the right.  Distances
are exact BFS path lengths.  Everything is computed from the identity
and translated, which is legitimate because left translation preserves
the metric; that very fact is also re-checked explicitly by
check_left_invariance rather than assumed silently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .errors import BudgetError, InputError
from .presentations import (
    OracleInconclusiveError,
    Presentation,
    TrivialityOracle,
    Verdict,
)
from .words import EMPTY, Word, free_reduce, invert, serialize

BALL_SCHEMA = "ggtlab/cayley-ball/1"


class BallTooLargeError(BudgetError):
    def __init__(self, limit: int):
        super().__init__(f"ball exceeds the {limit}-vertex guard")
        self.limit = limit


class CapExceededError(BudgetError):
    def __init__(self, cap: int):
        super().__init__(f"no path of length <= {cap} found")
        self.cap = cap


class NotGeneratingError(BudgetError):
    def __init__(self, cap: int):
        super().__init__(
            f"proposed generators failed to reach the whole ball within {cap} steps"
        )
        self.cap = cap


class _Canonicalizer:
    """Stable element ids under the oracle's equality.

    Uses the oracle's canonical form when one exists; otherwise falls
    back to pairwise equality against known representatives (quadratic,
    fine at desk scale).  An Unknown verdict during dedup aborts rather
    than risk building a wrong ball.
    """

    def __init__(self, oracle: TrivialityOracle):
        self.oracle = oracle
        self.use_canon = oracle.canonical_form(EMPTY) is not None
        self._by_canon: dict[Word, int] = {}
        self.reps: list[Word] = []

    def id_of(self, raw: Word, create: bool = True) -> Optional[int]:
        if self.use_canon:
            key = self.oracle.canonical_form(raw)
            idx = self._by_canon.get(key)
            if idx is None and create:
                idx = len(self.reps)
                self._by_canon[key] = idx
                self.reps.append(key)
            return idx
        reduced = free_reduce(raw)
        for i, rep in enumerate(self.reps):
            verdict = self.oracle.elements_equal(reduced, rep)
            if verdict is Verdict.UNKNOWN:
                raise OracleInconclusiveError(reduced)
            if verdict is Verdict.TRIVIAL:
                return i
        if not create:
            return None
        self.reps.append(reduced)
        return len(self.reps) - 1


@dataclass(frozen=True)
class CayleyBall:
    presentation: Presentation
    center: Word
    radius: int
    elements: tuple[Word, ...]
    distances: tuple[int, ...]
    adjacency: tuple[tuple[int, ...], ...]

    @cached_property
    def index(self) -> dict[Word, int]:
        return {w: i for i, w in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)


def build_ball(
    p: Presentation,
    o: TrivialityOracle,
    radius: int,
    max_elements: int = 10**6,
) -> CayleyBall:
    """All elements at word-metric distance <= radius from the identity.

    One canonical representative per element, exact BFS distances, and
    the adjacency relation restricted to the ball.
    """
    if radius < 0:
        raise InputError("radius must be nonnegative")
    canon = _Canonicalizer(o)
    letters = p.alphabet.letters()

    root = canon.id_of(EMPTY)
    dist = [0]
    frontier = [root]
    while frontier:
        next_frontier = []
        for i in frontier:
            if dist[i] == radius:
                continue
            for a in letters:
                raw = canon.reps[i] + (a,)
                before = len(canon.reps)
                j = canon.id_of(raw)
                if j == before:  # newly discovered
                    dist.append(dist[i] + 1)
                    next_frontier.append(j)
                    if len(canon.reps) > max_elements:
                        raise BallTooLargeError(max_elements)
        frontier = next_frontier

    neighbors: list[set[int]] = [set() for _ in canon.reps]
    for i, rep in enumerate(canon.reps):
        for a in letters:
            j = canon.id_of(rep + (a,), create=False)
            if j is not None and j != i:
                neighbors[i].add(j)
                neighbors[j].add(i)
    return CayleyBall(
        presentation=p,
        center=EMPTY,
        radius=radius,
        elements=tuple(canon.reps),
        distances=tuple(dist),
        adjacency=tuple(tuple(sorted(s)) for s in neighbors),
    )


def is_path(o: TrivialityOracle, vertices: Sequence[Word]) -> bool:
    """True iff consecutive vertices differ by one generator or inverse.

    A single vertex is a path of length zero.  Indecisive adjacency
    (some Unknown, no Trivial) aborts with OracleInconclusiveError.
    """
    if not vertices:
        raise InputError("a path needs at least one vertex")
    letters = o.presentation.alphabet.letters()
    for prev, cur in zip(vertices, vertices[1:]):
        saw_unknown = False
        for a in letters:
            verdict = o.elements_equal(cur, tuple(prev) + (a,))
            if verdict is Verdict.TRIVIAL:
                break
            if verdict is Verdict.UNKNOWN:
                saw_unknown = True
        else:
            if saw_unknown:
                raise OracleInconclusiveError(tuple(cur))
            return False
    return True


def _bfs_from_identity(
    p: Presentation,
    o: TrivialityOracle,
    moves: Sequence[Word],
    cap: int,
    targets: Optional[list[Word]] = None,
):
    """Distances from the identity under right multiplication by `moves`.

    Explores to depth `cap`, stopping early once every target has been
    assigned a distance.  Returns ({element id: distance}, per-target ids).
    """
    canon = _Canonicalizer(o)
    root = canon.id_of(EMPTY)
    dist: dict[int, int] = {root: 0}
    target_ids: Optional[list[int]] = None
    remaining: set[int] = set()
    if targets is not None:
        target_ids = [canon.id_of(t) for t in targets]
        remaining = {i for i in target_ids if i not in dist}
        if not remaining:
            return dist, target_ids
    frontier = [root]
    depth = 0
    while frontier and depth < cap:
        depth += 1
        next_frontier = []
        for i in frontier:
            for mv in moves:
                j = canon.id_of(canon.reps[i] + tuple(mv))
                if j not in dist:
                    dist[j] = depth
                    next_frontier.append(j)
                    remaining.discard(j)
        if targets is not None and not remaining:
            break
        frontier = next_frontier
    return dist, target_ids


def distance(
    p: Presentation,
    o: TrivialityOracle,
    phi: Word,
    psi: Word,
    cap: int,
) -> int:
    """Word-metric distance, via BFS on the left-translated quotient."""
    quotient = free_reduce(invert(phi) + tuple(psi))
    letters = [(a,) for a in p.alphabet.letters()]
    dist, ids = _bfs_from_identity(p, o, letters, cap, targets=[quotient])
    d = dist.get(ids[0])
    if d is None:
        raise CapExceededError(cap)
    return d


def distances_from_identity(
    p: Presentation,
    o: TrivialityOracle,
    targets: Sequence[Word],
    cap: int,
) -> list[int]:
    """BFS distances from the identity to each target, in one sweep."""
    dist, ids = _bfs_from_identity(p, o, [(a,) for a in p.alphabet.letters()], cap, list(targets))
    out = []
    for i in ids:
        d = dist.get(i)
        if d is None:
            raise CapExceededError(cap)
        out.append(d)
    return out


def pairwise_distances(
    p: Presentation,
    o: TrivialityOracle,
    elements: Sequence[Word],
    cap: int,
) -> list[list[int]]:
    """Full distance matrix between the given elements.

    Left invariance reduces every pair to a quotient distance from the
    identity, so a single BFS serves the whole matrix.
    """
    quotients = {}
    pairs = []
    for x in elements:
        inv_x = invert(x)
        row = []
        for y in elements:
            q = free_reduce(inv_x + tuple(y))
            quotients.setdefault(q, None)
            row.append(q)
        pairs.append(row)
    targets = list(quotients)
    dists = distances_from_identity(p, o, targets, cap)
    lookup = dict(zip(targets, dists))
    return [[lookup[q] for q in row] for row in pairs]


@dataclass(frozen=True)
class InvarianceEntry:
    pair: tuple[Word, Word]
    base_distance: int
    translated_distance: int

    @property
    def ok(self) -> bool:
        return self.base_distance == self.translated_distance


@dataclass(frozen=True)
class LeftInvarianceReport:
    delta: Word
    entries: tuple[InvarianceEntry, ...]

    @property
    def all_ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def violations(self) -> tuple[InvarianceEntry, ...]:
        return tuple(e for e in self.entries if not e.ok)


def check_left_invariance(
    p: Presentation,
    o: TrivialityOracle,
    delta: Word,
    pairs: Sequence[tuple[Word, Word]],
    cap: int,
) -> LeftInvarianceReport:
    """Assert d(delta phi, delta psi) = d(phi, psi) for each pair.

    A violation would indicate an implementation bug, never expected
    behaviour; it is reported rather than raised so callers can log it.
    """
    entries = []
    for phi, psi in pairs:
        base = distance(p, o, phi, psi, cap)
        translated = distance(p, o, tuple(delta) + tuple(phi), tuple(delta) + tuple(psi), cap)
        entries.append(InvarianceEntry((tuple(phi), tuple(psi)), base, translated))
    return LeftInvarianceReport(tuple(delta), tuple(entries))


def compare_generating_sets(
    p: Presentation,
    o: TrivialityOracle,
    new_gens: Sequence[Word],
    radius: int,
    cap: int,
) -> tuple[Fraction, Fraction]:
    """Bilipschitz constants between the old and new word metrics.

    Over all element pairs of the radius ball: lambda1 = max d_new/d_old
    and lambda2 = max d_old/d_new, both exact rationals.  Raises
    NotGeneratingError if the new set fails to reach some pair quotient
    within `cap` steps.
    """
    for g in new_gens:
        verdict = o.is_trivial(g)
        if verdict is Verdict.TRIVIAL:
            raise InputError(f"proposed generator {g!r} is the identity")
        if verdict is Verdict.UNKNOWN:
            raise OracleInconclusiveError(tuple(g))

    ball = build_ball(p, o, radius)
    quotients: dict[Word, None] = {}
    for x in ball.elements:
        inv_x = invert(x)
        for y in ball.elements:
            quotients.setdefault(free_reduce(inv_x + y), None)
    targets = [q for q in quotients if q != EMPTY]

    old_moves = [(a,) for a in p.alphabet.letters()]
    new_moves = [tuple(g) for g in new_gens] + [invert(g) for g in new_gens]

    dist_old, ids_old = _bfs_from_identity(p, o, old_moves, cap, targets=list(targets))
    if any(i not in dist_old for i in ids_old):
        raise CapExceededError(cap)
    dist_new, ids_new = _bfs_from_identity(p, o, new_moves, cap, targets=list(targets))
    if any(i not in dist_new for i in ids_new):
        raise NotGeneratingError(cap)

    lam1 = Fraction(1)
    lam2 = Fraction(1)
    for i_old, i_new in zip(ids_old, ids_new):
        d_old, d_new = dist_old[i_old], dist_new[i_new]
        lam1 = max(lam1, Fraction(d_new, d_old))
        lam2 = max(lam2, Fraction(d_old, d_new))
    return lam1, lam2


def ball_to_dict(ball: CayleyBall) -> dict:
    alphabet = ball.presentation.alphabet
    return {
        "schema": BALL_SCHEMA,
        "gens": alphabet.symbols,
        "center": serialize(ball.center, alphabet),
        "radius": ball.radius,
        "elements": [serialize(w, alphabet) for w in ball.elements],
        "distances": list(ball.distances),
        "adjacency": [list(row) for row in ball.adjacency],
    }


def save_ball(ball: CayleyBall, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(ball_to_dict(ball), fh, indent=2, sort_keys=True)
        fh.write("\n")
