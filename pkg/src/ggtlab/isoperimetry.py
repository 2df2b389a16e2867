"""Relator-conjugate products, exact minimal area, and the linearity scan.

A representation of a trivial word w is a product of conjugated relator
powers  u_1 r_1^{b_1} u_1^-1 ... u_k r_k^{b_k} u_k^-1  that freely
reduces to w.  Two costs are charged: the total conjugator length
sum L(u_j), and the weighted relator usage sum |b_j| L(r_j)^2 (the
square is the default weight; the exponent is configurable).  The area
of w is the least A that simultaneously bounds both sums over some
representation, and the hyperbolicity scan reports the ratios A(w)/L(w)
over all short irreducible trivial words.

Search strategy.  Enumerating raw products is hopeless: conjugators up
to the area budget give an exponential haystack.  Instead the search
runs backward from w over freely reduced words, one move splicing a
rotated relator power into the current word at some position.  Splicing
sigma between P and Q rewrites PQ -> free_reduce(P sigma Q), which
multiplies the represented element by the conjugate (Q^-1 sigma Q); so
every splice path from w to the empty word reconstructs, move by move,
a genuine relator product for w with exactly accounted costs, and
conversely every product of conjugates can be peeled one relator use at
a time this way.  Labels carry (conjugator cost, relator cost, factor
count); Pareto dominance per word keeps the frontier small, and a
length bound (a word longer than the remaining relator letters can
never shrink to empty) prunes the rest.  The relator-cost minimum over
a completed search is a true lower bound for every representation
inside the budget box, so a certificate is marked exact precisely when
its value meets that bound.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .errors import BudgetError, CheckFailure, InputError
from .presentations import (
    OracleInconclusiveError,
    Presentation,
    TrivialityOracle,
    Verdict,
)
from .words import (
    EMPTY,
    Word,
    concat,
    conjugate,
    cyclic_reduce,
    free_reduce,
    invert,
    power,
    reduced_words,
    serialize,
)

SCAN_SCHEMA = "ggtlab/scan-report/1"


class NotTrivialError(InputError):
    def __init__(self, w: Word):
        super().__init__(f"word {w!r} does not represent the identity")
        self.word = w


class NotIrreducibleError(InputError):
    def __init__(self, w: Word):
        super().__init__(f"word {w!r} is not freely reduced")
        self.word = w


class BudgetExceededError(BudgetError):
    def __init__(self, upper_bound: Optional[int], stats: dict):
        bound = "no representation found" if upper_bound is None else f"best bound {upper_bound}"
        super().__init__(f"area search budget exhausted; {bound}")
        self.upper_bound = upper_bound
        self.stats = stats


class Factor(NamedTuple):
    conjugator: Word
    relator: int
    power: int


@dataclass(frozen=True)
class RelatorProduct:
    factors: tuple[Factor, ...] = ()


@dataclass(frozen=True)
class SearchBudget:
    max_area: int = 64
    max_factors: int = 8
    max_nodes: int = 10_000_000


@dataclass(frozen=True)
class AreaCertificate:
    value: int
    witness: RelatorProduct
    exact: bool
    lower_bound: int
    stats: dict = field(compare=False, default_factory=dict)


def _validate_product(p: Presentation, rp: RelatorProduct) -> None:
    for f in rp.factors:
        if not p.alphabet.contains_word(f.conjugator):
            raise InputError(f"conjugator {f.conjugator!r} outside the alphabet")
        if not 0 <= f.relator < len(p.relators):
            raise InputError(f"relator index {f.relator} out of range")
        if f.power == 0:
            raise InputError("factor powers must be nonzero")


def evaluate_product(p: Presentation, rp: RelatorProduct) -> Word:
    """Free reduction of the full concatenated product; empty product gives the empty word."""
    _validate_product(p, rp)
    pieces = []
    for f in rp.factors:
        pieces.append(conjugate(f.conjugator, power(p.relators[f.relator], f.power)))
    return free_reduce(concat(*pieces))


def product_cost(
    p: Presentation, rp: RelatorProduct, relator_exponent: int = 2
) -> tuple[int, int]:
    """(total conjugator length, weighted relator usage), on the words as stored."""
    _validate_product(p, rp)
    conj_len = sum(len(f.conjugator) for f in rp.factors)
    rel_cost = sum(
        abs(f.power) * len(p.relators[f.relator]) ** relator_exponent
        for f in rp.factors
    )
    return conj_len, rel_cost


class _Splice(NamedTuple):
    """One precomputed insertable body with its conjugator middles."""

    relator: int
    sign: int
    uses: int  # |b|
    body: Word  # rotated power of the cyclically reduced core
    mid_short: Word  # conjugator middle, rotation absorbed leftward
    mid_long: Word  # conjugator middle, rotation absorbed rightward
    rc_step: int


def _build_splices(p: Presentation, area_budget: int, relator_exponent: int) -> list[_Splice]:
    out: list[_Splice] = []
    for j, r in enumerate(p.relators):
        rr = free_reduce(r)
        if not rr:
            continue  # inert relator: contributes nothing to any product
        z, core = cyclic_reduce(rr)
        unit = len(r) ** relator_exponent
        if unit == 0:
            continue
        max_uses = area_budget // unit
        inv_z = invert(z)
        for sign in (1, -1):
            base = core if sign > 0 else invert(core)
            for b in range(1, max_uses + 1):
                bp = base * b
                seen: set[Word] = set()
                for i in range(len(base)):
                    body = bp[i:] + bp[:i]
                    if body in seen:
                        continue
                    seen.add(body)
                    mid_short = free_reduce(invert(bp[:i]) + inv_z)
                    mid_long = free_reduce(bp[i:] + inv_z)
                    out.append(_Splice(j, sign, b, body, mid_short, mid_long, b * unit))
    return out


class _Label(NamedTuple):
    word: Word
    conj_cost: int
    rel_cost: int
    factors: int
    parent: int  # index into the label store, -1 for the root
    move_u: Word
    move_relator: int
    move_power: int


def _dominated(cand: tuple[int, int, int], entries: list[tuple[int, int, int]]) -> bool:
    return any(
        c <= cand[0] and r <= cand[1] and k <= cand[2] for c, r, k in entries
    )


def _min_area_search(
    p: Presentation,
    w: Word,
    budget: SearchBudget,
    relator_exponent: int,
) -> tuple[list[_Label], list[int], dict]:
    """Backward splice search from w to the empty word.

    Returns the label store, the indices of accepted empty-word labels,
    and search statistics (including whether the budget box was fully
    explored, which is what entitles the caller to exactness claims).
    """
    area_budget = budget.max_area
    splices = _build_splices(p, area_budget, relator_exponent)
    # How many letters of shrinkage a unit of remaining relator budget can buy.
    shrink = max((len(s.body) / s.rc_step for s in splices), default=0.0)

    labels: list[_Label] = []
    accepted: dict[Word, list[tuple[int, int, int]]] = {}
    goals: list[int] = []
    heap: list[tuple[int, int, int, int, int]] = []
    counter = 0

    def push(label: _Label) -> None:
        nonlocal counter
        entries = accepted.get(label.word)
        if entries and _dominated((label.conj_cost, label.rel_cost, label.factors), entries):
            return
        labels.append(label)
        heapq.heappush(
            heap,
            (label.rel_cost, label.conj_cost, label.factors, counter, len(labels) - 1),
        )
        counter += 1

    if len(w) <= area_budget * shrink or not w:
        push(_Label(w, 0, 0, 0, -1, EMPTY, -1, 0))

    nodes = 0
    completed = True
    while heap:
        if nodes >= budget.max_nodes:
            completed = False
            break
        rel_cost, conj_cost, k, _, idx = heapq.heappop(heap)
        label = labels[idx]
        cand = (conj_cost, rel_cost, k)
        entries = accepted.setdefault(label.word, [])
        if _dominated(cand, entries):
            continue
        entries.append(cand)
        nodes += 1
        v = label.word
        if not v:
            goals.append(idx)
            continue
        if k == budget.max_factors:
            continue
        inv_suffix: list[Word] = [EMPTY]
        for pos in range(len(v) - 1, -1, -1):
            inv_suffix.append(invert(v[pos:]))
        # inv_suffix[n] = invert of the last n letters of v
        for s in splices:
            rc2 = rel_cost + s.rc_step
            if rc2 > area_budget:
                continue
            cap = (area_budget - rc2) * shrink
            for pos in range(len(v) + 1):
                nxt = free_reduce(v[:pos] + s.body + v[pos:])
                if len(nxt) > cap:
                    continue
                inv_q = inv_suffix[len(v) - pos]
                u_short = free_reduce(inv_q + s.mid_short)
                u_long = free_reduce(inv_q + s.mid_long)
                u = u_short if len(u_short) <= len(u_long) else u_long
                cl2 = conj_cost + len(u)
                if cl2 > area_budget:
                    continue
                push(_Label(nxt, cl2, rc2, k + 1, idx, u, s.relator, -s.sign * s.uses))

    stats = {
        "nodes": nodes,
        "labels": len(labels),
        "states": len(accepted),
        "completed": completed,
        "max_area": area_budget,
        "max_factors": budget.max_factors,
    }
    return labels, goals, stats


def _reconstruct(labels: list[_Label], goal: int) -> RelatorProduct:
    factors = []
    idx = goal
    while labels[idx].parent != -1:
        lab = labels[idx]
        factors.append(Factor(lab.move_u, lab.move_relator, lab.move_power))
        idx = lab.parent
    return RelatorProduct(tuple(factors))


def area(
    p: Presentation,
    o: TrivialityOracle,
    w: Word,
    budget: Optional[SearchBudget] = None,
    relator_exponent: int = 2,
) -> AreaCertificate:
    """Minimal area certificate for an irreducible trivial word.

    The certificate's witness always evaluates back to w and both of its
    cost sums are bounded by the value.  `exact` is claimed only when the
    value coincides with the relator-cost lower bound established by a
    fully explored search box; otherwise the value is the best upper
    bound found.  Raises BudgetExceededError when no representation fits
    the box at all.
    """
    if budget is None:
        budget = SearchBudget()
    w = tuple(w)
    if free_reduce(w) != w:
        raise NotIrreducibleError(w)
    verdict = o.is_trivial(w)
    if verdict is Verdict.NONTRIVIAL:
        raise NotTrivialError(w)
    if verdict is Verdict.UNKNOWN:
        raise OracleInconclusiveError(w)
    if not w:
        return AreaCertificate(0, RelatorProduct(), True, 0, {"nodes": 0, "completed": True})

    labels, goals, stats = _min_area_search(p, w, budget, relator_exponent)
    if not goals:
        raise BudgetExceededError(None, stats)

    def sort_key(idx: int):
        lab = labels[idx]
        return (max(lab.conj_cost, lab.rel_cost), lab.rel_cost, lab.conj_cost, lab.factors, idx)

    best = min(goals, key=sort_key)
    lab = labels[best]
    value = max(lab.conj_cost, lab.rel_cost)
    rc_min = min(labels[g].rel_cost for g in goals)
    # The factor cap may not have excluded anything at or below the value:
    # every representation with relator cost <= value uses at most
    # value // min_unit factors.
    min_unit = min(
        (len(r) ** relator_exponent for r in p.relators if free_reduce(r)),
        default=None,
    )
    cap_safe = min_unit is not None and value // min_unit <= budget.max_factors
    exact = stats["completed"] and value == rc_min and cap_safe

    witness = _reconstruct(labels, best)
    if evaluate_product(p, witness) != w:
        raise CheckFailure(f"witness for {w!r} failed to evaluate back to it")
    cl, rc = product_cost(p, witness, relator_exponent)
    if (cl, rc) != (lab.conj_cost, lab.rel_cost) or max(cl, rc) > value:
        raise CheckFailure(f"witness cost mismatch for {w!r}: {(cl, rc)} vs label")

    stats = dict(stats, solutions=len(goals), rc_min=rc_min)
    return AreaCertificate(value, witness, exact, rc_min, stats)


# ---------------------------------------------------------------------------
# linear-isoperimetry scan


@dataclass(frozen=True)
class ScanEntry:
    word: Word
    length: int
    area: int
    ratio: Fraction
    exact: bool


@dataclass(frozen=True)
class ScanReport:
    max_len: int
    entries: tuple[ScanEntry, ...]
    undecided: tuple[Word, ...]
    sup_ratio: Optional[Fraction]
    all_exact: bool
    stats: dict = field(compare=False, default_factory=dict)

    @property
    def vacuous(self) -> bool:
        return self.sup_ratio is None

    def to_dict(self, p: Presentation) -> dict:
        alphabet = p.alphabet
        sup = (
            None
            if self.sup_ratio is None
            else {"numerator": self.sup_ratio.numerator, "denominator": self.sup_ratio.denominator}
        )
        return {
            "schema": SCAN_SCHEMA,
            "max_len": self.max_len,
            "entries": [
                {
                    "word": serialize(e.word, alphabet),
                    "length": e.length,
                    "area": e.area,
                    "ratio": {"numerator": e.ratio.numerator, "denominator": e.ratio.denominator},
                    "exact": e.exact,
                }
                for e in self.entries
            ],
            "undecided": [serialize(u, alphabet) for u in self.undecided],
            "sup_ratio": sup,
            "vacuous": self.vacuous,
            "all_exact": self.all_exact,
            "stats": self.stats,
        }


def _letter_sort_key(w: Word) -> tuple:
    return tuple((abs(x), 0 if x > 0 else 1) for x in w)


def _cyclic_canonical(w: Word) -> Word:
    rots = [w[i:] + w[:i] for i in range(len(w))]
    reduced = [r for r in rots if free_reduce(r) == r]
    return min(reduced, key=_letter_sort_key)


def _area_task(args) -> AreaCertificate:
    p, o, w, budget, relator_exponent = args
    return area(p, o, w, budget, relator_exponent)


def hyperbolicity_scan(
    p: Presentation,
    o: TrivialityOracle,
    max_len: int,
    budget: Optional[SearchBudget] = None,
    symmetry: bool = False,
    relator_exponent: int = 2,
    threads: int = 1,
) -> ScanReport:
    """Area-to-length ratios over all irreducible trivial words up to max_len.

    Words with an Unknown verdict land in the undecided bucket instead of
    aborting the scan.  With `symmetry` set, only the lexicographically
    least reduced cyclic rotation of each word is scanned.  The supremum
    is None (vacuous) when no nonempty irreducible trivial word exists.
    """
    if max_len < 1:
        raise InputError("max_len must be positive")
    if budget is None:
        budget = SearchBudget()

    candidates = []
    undecided = []
    for w in reduced_words(p.alphabet, max_len, min_len=1):
        if symmetry and w != _cyclic_canonical(w):
            continue
        verdict = o.is_trivial(w)
        if verdict is Verdict.UNKNOWN:
            undecided.append(w)
        elif verdict is Verdict.TRIVIAL:
            candidates.append(w)

    if threads > 1 and len(candidates) > 1:
        from concurrent.futures import ProcessPoolExecutor

        args = [(p, o, w, budget, relator_exponent) for w in candidates]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            certs = list(pool.map(_area_task, args))
    else:
        certs = [area(p, o, w, budget, relator_exponent) for w in candidates]

    entries = tuple(
        ScanEntry(w, len(w), c.value, Fraction(c.value, len(w)), c.exact)
        for w, c in zip(candidates, certs)
    )
    sup = max((e.ratio for e in entries), default=None)
    total_nodes = sum(c.stats.get("nodes", 0) for c in certs)
    return ScanReport(
        max_len=max_len,
        entries=entries,
        undecided=tuple(undecided),
        sup_ratio=sup,
        all_exact=all(e.exact for e in entries) if entries else True,
        stats={"words_scanned": len(entries), "nodes": total_nodes},
    )
