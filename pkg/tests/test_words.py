import pytest
from hypothesis import given, strategies as st

from ggtlab.words import (
    EMPTY,
    Alphabet,
    AlphabetError,
    UnknownSymbolError,
    concat,
    conjugate,
    free_reduce,
    invert,
    is_reduced,
    parse_word,
    power,
    reduced_words,
    serialize,
    word_length,
)

AB = Alphabet("ab")

letters_ab = st.sampled_from([1, -1, 2, -2])
words_ab = st.lists(letters_ab, max_size=24).map(tuple)


def test_alphabet_rejects_bad_symbols():
    with pytest.raises(AlphabetError):
        Alphabet("aa")
    with pytest.raises(AlphabetError):
        Alphabet("a1")
    with pytest.raises(AlphabetError):
        Alphabet("aB")
    with pytest.raises(AlphabetError):
        Alphabet("")


def test_parse_examples():
    assert parse_word("", AB) == EMPTY
    assert parse_word("abA", AB) == (1, 2, -1)
    with pytest.raises(UnknownSymbolError) as exc:
        parse_word("axb", AB)
    assert exc.value.position == 1


def test_parse_ignores_whitespace():
    assert parse_word("a bA\n", AB) == (1, 2, -1)


def test_word_length_examples():
    assert word_length(EMPTY) == 0
    assert word_length(parse_word("abA", AB)) == 3
    assert word_length(parse_word("aAaA", AB)) == 4  # counts before reduction


def test_free_reduce_examples():
    assert free_reduce(parse_word("aA", AB)) == EMPTY
    assert free_reduce(parse_word("abBA", AB)) == EMPTY
    w = parse_word("abAB", AB)
    assert free_reduce(w) == w


def test_invert_examples():
    assert serialize(invert(parse_word("ab", AB)), AB) == "BA"
    assert invert(EMPTY) == EMPTY
    w = parse_word("aBa", AB)
    assert invert(invert(w)) == w


def test_conjugate_examples():
    aaa = parse_word("aaa", AB)
    assert conjugate(EMPTY, aaa) == aaa
    assert serialize(conjugate(parse_word("b", AB), aaa), AB) == "baaaB"
    assert serialize(conjugate(parse_word("ab", AB), EMPTY), AB) == "abBA"


def test_power_examples():
    ab = parse_word("ab", AB)
    assert serialize(power(ab, 2), AB) == "abab"
    assert serialize(power(ab, -1), AB) == "BA"
    assert power(parse_word("a", AB), 0) == EMPTY


@given(words_ab)
def test_reduce_idempotent(w):
    assert free_reduce(free_reduce(w)) == free_reduce(w)


@given(words_ab, words_ab)
def test_reduce_confluent_with_concat(x, y):
    assert free_reduce(concat(x, y)) == free_reduce(concat(free_reduce(x), free_reduce(y)))


@given(words_ab)
def test_reduce_shortens_iff_reducible(w):
    r = free_reduce(w)
    assert len(r) <= len(w)
    assert (len(r) == len(w)) == is_reduced(w)


@given(words_ab)
def test_inverse_cancels(w):
    assert free_reduce(concat(w, invert(w))) == EMPTY


@given(words_ab, st.integers(-5, 5))
def test_power_length(w, b):
    assert word_length(power(w, b)) == abs(b) * word_length(w)


@given(words_ab)
def test_serialize_parse_roundtrip(w):
    assert parse_word(serialize(w, AB), AB) == w


def test_reduced_words_enumeration():
    ws = list(reduced_words(AB, 2))
    assert len(ws) == 1 + 4 + 12
    assert all(is_reduced(w) for w in ws)
    assert ws[0] == EMPTY
    # ordered by length, then a < A < b < B
    assert [serialize(w, AB) for w in ws[1:5]] == ["a", "A", "b", "B"]
