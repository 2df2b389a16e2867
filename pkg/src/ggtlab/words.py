"""Letters, words, and the free-reduction algebra over a finite alphabet.

A word is an immutable tuple of nonzero ints: letter ``+i`` is the i-th
generator (1-based), ``-i`` its inverse.  In text form a generator is a
lowercase letter and its inverse the corresponding uppercase letter, so
``"abA"`` parses to ``(1, 2, -1)`` over the alphabet ``ab``.  The empty
tuple is the empty word and stands for the group identity.

Everything here is pure: operations return fresh tuples, so words can be
shared freely between concurrent tasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InputError

Word = tuple[int, ...]

EMPTY: Word = ()


class AlphabetError(InputError):
    pass


class UnknownSymbolError(InputError):
    """A character outside the alphabet (or its uppercase forms)."""

    def __init__(self, symbol: str, position: int):
        super().__init__(f"unknown symbol {symbol!r} at position {position}")
        self.symbol = symbol
        self.position = position


@dataclass(frozen=True)
class Alphabet:
    """Ordered generator symbols; single lowercase ASCII letters only.

    Restricting symbols to lowercase letters keeps the text form
    unambiguous (uppercase is reserved for inverses) and rules out
    identity-like symbols such as ``1`` or ``e`` by construction.
    """

    symbols: str

    def __post_init__(self):
        if not self.symbols:
            raise AlphabetError("alphabet needs at least one generator")
        for ch in self.symbols:
            if not ("a" <= ch <= "z"):
                raise AlphabetError(f"generator {ch!r} is not a lowercase ASCII letter")
        if len(set(self.symbols)) != len(self.symbols):
            raise AlphabetError(f"duplicate generator in {self.symbols!r}")

    @property
    def size(self) -> int:
        return len(self.symbols)

    def letters(self) -> tuple[int, ...]:
        """All signed letters in canonical order: a, A, b, B, ..."""
        out = []
        for i in range(1, self.size + 1):
            out.append(i)
            out.append(-i)
        return tuple(out)

    def letter_of(self, ch: str) -> int:
        low = ch.lower()
        idx = self.symbols.find(low)
        if idx < 0 or not ch.isalpha():
            raise AlphabetError(f"{ch!r} is not a letter of alphabet {self.symbols!r}")
        return -(idx + 1) if ch.isupper() else idx + 1

    def char_of(self, letter: int) -> str:
        sym = self.symbols[abs(letter) - 1]
        return sym.upper() if letter < 0 else sym

    def contains_word(self, w: Word) -> bool:
        return all(x != 0 and abs(x) <= self.size for x in w)


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Transliterate text to a word, one letter per character; no reduction.

    Whitespace is skipped.  Raises UnknownSymbolError with the offending
    position for anything not in the alphabet or its uppercase forms.
    """
    out = []
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        low = ch.lower()
        idx = alphabet.symbols.find(low)
        if idx < 0 or not ch.isalpha():
            raise UnknownSymbolError(ch, pos)
        out.append(-(idx + 1) if ch.isupper() else idx + 1)
    return tuple(out)


def serialize(w: Word, alphabet: Alphabet) -> str:
    """Exact inverse of parse_word on whitespace-free text."""
    return "".join(alphabet.char_of(x) for x in w)


def word_length(w: Word) -> int:
    """Letter count, multiplicities included (the length of the word as written)."""
    return len(w)


def free_reduce(w: Iterable[int]) -> Word:
    """Delete adjacent inverse pairs until none remain.

    Single left-to-right stack pass; cancellation is confluent, so the
    result is the unique irreducible word for the same group element.
    """
    stack: list[int] = []
    for x in w:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def is_reduced(w: Word) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def concat(*ws: Word) -> Word:
    out: Word = ()
    for w in ws:
        out += tuple(w)
    return out


def invert(w: Word) -> Word:
    """Reverse the letters and flip every sign; w followed by invert(w) cancels."""
    return tuple(-x for x in reversed(w))


def conjugate(u: Word, r: Word) -> Word:
    """The unreduced concatenation u r u^-1."""
    return tuple(u) + tuple(r) + invert(u)


def power(z: Word, b: int) -> Word:
    """z repeated b times; negative b repeats the inverse, zero gives the empty word."""
    if b >= 0:
        return tuple(z) * b
    return invert(z) * (-b)


def exponent_vector(w: Word, size: int) -> tuple[int, ...]:
    """Net exponent of each generator, in alphabet order."""
    out = [0] * size
    for x in w:
        out[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(out)


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split a reduced word as (z, core) with w = z core z^-1 and core cyclically reduced."""
    w = free_reduce(w)
    lo, hi = 0, len(w)
    while hi - lo >= 2 and w[lo] == -w[hi - 1]:
        lo += 1
        hi -= 1
    return w[:lo], w[lo:hi]


def reduced_words(alphabet: Alphabet, max_len: int, min_len: int = 0) -> Iterable[Word]:
    """All freely reduced words with min_len <= length <= max_len.

    Ordered by length, then lexicographically in the a < A < b < B < ...
    letter order; deterministic across runs.
    """
    letters = alphabet.letters()

    def extend(prefix: list[int], remaining: int):
        if len(prefix) >= min_len:
            yield tuple(prefix)
        if remaining == 0:
            return
        last = prefix[-1] if prefix else 0
        for x in letters:
            if x == -last:
                continue
            prefix.append(x)
            yield from extend(prefix, remaining - 1)
            prefix.pop()

    # regroup depth-first enumeration by length
    by_len: dict[int, list[Word]] = {}
    for w in extend([], max_len):
        by_len.setdefault(len(w), []).append(w)
    for n in range(min_len, max_len + 1):
        yield from by_len.get(n, [])


def words_by_exact_length(alphabet: Alphabet, length: int) -> list[Word]:
    """Freely reduced words of exactly the given length, lexicographic order."""
    return list(reduced_words(alphabet, length, min_len=length))
