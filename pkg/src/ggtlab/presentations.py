"""Finitely presented groups and pluggable triviality (word-problem) oracles.

A presentation is an alphabet plus a finite relator list.  Oracles answer
"does this word represent the identity?" with a three-valued verdict:
the general word problem is only semi-decidable, so budget-limited
strategies must be allowed to answer Unknown rather than guess.  A
Trivial or Nontrivial verdict is a hard claim about the presented group
and each strategy validates, at construction time, the preconditions
under which its claims are sound.
"""

from __future__ import annotations

import enum
import math
import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .errors import BudgetError, InputError
from .words import (
    Alphabet,
    Word,
    concat,
    exponent_vector,
    free_reduce,
    invert,
    parse_word,
)


class PresentationError(InputError):
    pass


class RelatorOutOfAlphabetError(PresentationError):
    def __init__(self, index: int, detail: str = ""):
        super().__init__(f"relator {index} uses letters outside the alphabet{detail}")
        self.index = index


class AlphabetMismatchError(InputError):
    def __init__(self, w: Word, size: int):
        super().__init__(f"word {w!r} does not fit an alphabet of {size} generators")


class OracleScopeError(InputError):
    """The presentation is outside the declared validity of this strategy."""


class OracleInconclusiveError(BudgetError):
    """An Unknown verdict where a decisive one was required to proceed."""

    def __init__(self, w: Word):
        super().__init__(f"oracle returned Unknown for {w!r}")
        self.word = w


class Verdict(enum.Enum):
    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: tuple[Word, ...] = ()

    def nonempty_relators(self) -> tuple[tuple[int, Word], ...]:
        return tuple((i, r) for i, r in enumerate(self.relators) if free_reduce(r))


def validate_presentation(p: Presentation) -> None:
    """Check alphabet invariants and that every relator fits the alphabet.

    Relators that freely reduce to the empty word are legal (the free
    group convention) but flagged with a warning, since they contribute
    nothing to any relator product.
    """
    for i, r in enumerate(p.relators):
        if not p.alphabet.contains_word(r):
            raise RelatorOutOfAlphabetError(i)
        if not free_reduce(r):
            warnings.warn(
                f"relator {i} freely reduces to the empty word; it is inert "
                "in area searches",
                stacklevel=2,
            )


def presentation(gens: str, *relator_texts: str) -> Presentation:
    """Convenience constructor from text, validated."""
    alphabet = Alphabet(gens)
    rels = tuple(parse_word(t, alphabet) for t in relator_texts)
    p = Presentation(alphabet, rels)
    validate_presentation(p)
    return p


# ---------------------------------------------------------------------------
# presentation files: `gens: ab` then `rel: abAB` lines, `#` comments


def parse_presentation_text(text: str) -> Presentation:
    alphabet: Optional[Alphabet] = None
    relators: list[Word] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gens:"):
            if alphabet is not None:
                raise PresentationError(f"line {lineno}: duplicate gens line")
            alphabet = Alphabet(line[len("gens:"):].strip())
        elif line.startswith("rel:"):
            if alphabet is None:
                raise PresentationError(f"line {lineno}: rel before gens")
            body = line[len("rel:"):].strip()
            relators.append(parse_word(body, alphabet))
        else:
            raise PresentationError(f"line {lineno}: expected `gens:` or `rel:`")
    if alphabet is None:
        raise PresentationError("missing `gens:` line")
    p = Presentation(alphabet, tuple(relators))
    validate_presentation(p)
    return p


def load_presentation(path) -> Presentation:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_presentation_text(fh.read())


# ---------------------------------------------------------------------------
# oracles


class TrivialityOracle:
    """Base strategy interface; instances are immutable and queries pure."""

    presentation: Presentation

    def is_trivial(self, w: Word) -> Verdict:
        raise NotImplementedError

    def canonical_form(self, w: Word) -> Optional[Word]:
        """A normal form respecting group equality, or None if unavailable."""
        return None

    def elements_equal(self, w1: Word, w2: Word) -> Verdict:
        return self.is_trivial(concat(w1, invert(w2)))

    def _check(self, w: Word) -> None:
        if not self.presentation.alphabet.contains_word(w):
            raise AlphabetMismatchError(w, self.presentation.alphabet.size)


@dataclass(frozen=True)
class FreeReductionOracle(TrivialityOracle):
    """Sound exactly for free groups: every relator must freely reduce to empty."""

    presentation: Presentation

    def __post_init__(self):
        for i, r in enumerate(self.presentation.relators):
            if free_reduce(r):
                raise OracleScopeError(
                    f"free-reduction oracle requires trivial-in-the-free-group "
                    f"relators; relator {i} is {r!r}"
                )

    def is_trivial(self, w: Word) -> Verdict:
        self._check(w)
        return Verdict.TRIVIAL if not free_reduce(w) else Verdict.NONTRIVIAL

    def canonical_form(self, w: Word) -> Word:
        self._check(w)
        return free_reduce(w)


@dataclass(frozen=True)
class ExponentSumOracle(TrivialityOracle):
    """Per-generator net-exponent test modulo declared orders (0 = infinite).

    Valid only when every relator either has zero net exponent on every
    generator, or is a pure power of a single generator whose exponent is
    a multiple of that generator's declared modulus.  The caller asserts
    the presented group really is the direct sum of the corresponding
    cyclic groups; with the relators above plus all pairwise commutators
    that is automatic (see choose_oracle).
    """

    presentation: Presentation
    moduli: tuple[int, ...]

    def __post_init__(self):
        size = self.presentation.alphabet.size
        if len(self.moduli) != size:
            raise OracleScopeError(f"need {size} moduli, got {len(self.moduli)}")
        if any(m < 0 for m in self.moduli):
            raise OracleScopeError("moduli must be nonnegative (0 = infinite order)")
        for i, r in enumerate(self.presentation.relators):
            ev = exponent_vector(r, size)
            support = [g for g, e in enumerate(ev) if e != 0]
            if not support:
                continue
            if len(support) > 1:
                raise OracleScopeError(
                    f"relator {i} has nonzero net exponent on several generators"
                )
            g = support[0]
            core = free_reduce(r)
            if any(abs(x) - 1 != g for x in core):
                raise OracleScopeError(
                    f"relator {i} mentions several generators but is not "
                    "exponent-balanced"
                )
            m = self.moduli[g]
            if m == 0 or ev[g] % m != 0:
                raise OracleScopeError(
                    f"relator {i} forces order dividing {abs(ev[g])} on generator "
                    f"{self.presentation.alphabet.symbols[g]}, declared modulus {m}"
                )

    def _residues(self, w: Word) -> tuple[int, ...]:
        ev = exponent_vector(w, self.presentation.alphabet.size)
        return tuple(e % m if m else e for e, m in zip(ev, self.moduli))

    def is_trivial(self, w: Word) -> Verdict:
        self._check(w)
        zero = all(x == 0 for x in self._residues(w))
        return Verdict.TRIVIAL if zero else Verdict.NONTRIVIAL

    def canonical_form(self, w: Word) -> Word:
        """Sorted power form a^e1 b^e2 ... with exponents reduced mod the moduli."""
        self._check(w)
        out: list[int] = []
        for g, e in enumerate(self._residues(w), start=1):
            out.extend([g] * e if e >= 0 else [-g] * (-e))
        return tuple(out)


@dataclass(frozen=True)
class BoundedRewriteOracle(TrivialityOracle):
    """Breadth-first closure under cancellation moves and relator insertion.

    Moves from a word: delete an adjacent inverse pair, insert an inverse
    pair at any position, or insert a relator or inverse relator at any
    position.  Reaching the empty word proves triviality (every move
    preserves the represented element); exhausting the caps proves
    nothing, so the other verdict is Unknown, never Nontrivial.
    """

    presentation: Presentation
    length_cap: int = 12
    step_cap: int = 20000

    def _moves(self, w: Word):
        n = len(w)
        for i in range(n - 1):
            if w[i] == -w[i + 1]:
                yield w[:i] + w[i + 2:]
        if n + 2 <= self.length_cap:
            letters = self.presentation.alphabet.letters()
            for i in range(n + 1):
                for x in letters:
                    yield w[:i] + (x, -x) + w[i:]
        for r in self.presentation.relators:
            for ins in (tuple(r), invert(r)):
                if ins and n + len(ins) <= self.length_cap:
                    for i in range(n + 1):
                        yield w[:i] + ins + w[i:]

    def is_trivial(self, w: Word) -> Verdict:
        self._check(w)
        start = free_reduce(w)
        if not start:
            return Verdict.TRIVIAL
        if len(start) > self.length_cap:
            return Verdict.UNKNOWN
        seen = {start}
        queue = deque([start])
        steps = 0
        while queue and steps < self.step_cap:
            cur = queue.popleft()
            steps += 1
            for nxt in self._moves(cur):
                if nxt in seen:
                    continue
                if not nxt:
                    return Verdict.TRIVIAL
                seen.add(nxt)
                queue.append(nxt)
        return Verdict.UNKNOWN


def infer_exponent_moduli(p: Presentation) -> tuple[int, ...]:
    """Per-generator gcd of pure-power relator exponents; 0 where none occur."""
    size = p.alphabet.size
    moduli = [0] * size
    for r in p.relators:
        ev = exponent_vector(r, size)
        support = [g for g, e in enumerate(ev) if e != 0]
        core = free_reduce(r)
        if len(support) == 1 and core and all(abs(x) - 1 == support[0] for x in core):
            g = support[0]
            moduli[g] = math.gcd(moduli[g], abs(ev[g]))
    return tuple(moduli)


def _is_commutator_of_generators(r: Word) -> bool:
    w = free_reduce(r)
    if len(w) != 4:
        return False
    x, y = w[0], w[1]
    return x > 0 and y > 0 and x != y and w == (x, y, -x, -y)


def choose_oracle(
    p: Presentation,
    strategy: str = "auto",
    moduli: Optional[tuple[int, ...]] = None,
    length_cap: int = 12,
    step_cap: int = 20000,
) -> TrivialityOracle:
    """Pick a sound oracle for a presentation.

    `auto` selects free reduction when all relators are freely trivial,
    and the exponent-sum oracle only for presentations that are visibly
    direct sums of cyclic groups: every relator a pure power or a
    two-generator commutator, with every generator pair's commutator
    present (vacuous for one generator).  Everything else falls back to
    the bounded rewrite search.
    """
    if strategy == "free":
        return FreeReductionOracle(p)
    if strategy == "expsum":
        return ExponentSumOracle(p, moduli if moduli is not None else infer_exponent_moduli(p))
    if strategy == "rewrite":
        return BoundedRewriteOracle(p, length_cap, step_cap)
    if strategy != "auto":
        raise InputError(f"unknown oracle strategy {strategy!r}")

    if all(not free_reduce(r) for r in p.relators):
        return FreeReductionOracle(p)

    size = p.alphabet.size
    pairs_needed = {(i, j) for i in range(1, size + 1) for j in range(i + 1, size + 1)}
    pairs_seen = set()
    visibly_abelian = True
    for r in p.relators:
        core = free_reduce(r)
        if not core:
            continue
        if _is_commutator_of_generators(core):
            x, y = core[0], core[1]
            pairs_seen.add((min(x, y), max(x, y)))
        elif not all(abs(c) == abs(core[0]) for c in core):
            visibly_abelian = False
    if visibly_abelian and pairs_needed <= pairs_seen:
        try:
            return ExponentSumOracle(p, infer_exponent_moduli(p))
        except OracleScopeError:
            pass
    return BoundedRewriteOracle(p, length_cap, step_cap)
