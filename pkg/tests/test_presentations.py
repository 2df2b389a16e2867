import itertools

import pytest

from ggtlab.presentations import (
    AlphabetMismatchError,
    BoundedRewriteOracle,
    ExponentSumOracle,
    FreeReductionOracle,
    OracleScopeError,
    Presentation,
    RelatorOutOfAlphabetError,
    Verdict,
    choose_oracle,
    infer_exponent_moduli,
    parse_presentation_text,
    presentation,
    validate_presentation,
)
from ggtlab.words import Alphabet, parse_word, serialize, free_reduce


def words_up_to(alphabet, n):
    """Every word (reduced or not) over the alphabet with length <= n."""
    letters = alphabet.letters()
    for length in range(n + 1):
        yield from itertools.product(letters, repeat=length)


def test_validate_examples():
    presentation("a", "aaa")
    presentation("ab", "abAB")
    with pytest.raises(RelatorOutOfAlphabetError) as exc:
        validate_presentation(Presentation(Alphabet("a"), ((1, 3),)))
    assert exc.value.index == 0


def test_empty_relator_flagged():
    with pytest.warns(UserWarning, match="relator 0"):
        presentation("ab", "")


def test_presentation_file_parsing():
    text = "# the free abelian plane\ngens: ab\nrel: abAB  # commutator\n"
    p = parse_presentation_text(text)
    assert p.alphabet.symbols == "ab"
    assert [serialize(r, p.alphabet) for r in p.relators] == ["abAB"]
    with pytest.raises(Exception):
        parse_presentation_text("rel: aa\n")


def test_free_reduction_oracle(f2):
    p, o = f2
    assert isinstance(o, FreeReductionOracle)
    assert o.is_trivial(parse_word("abAB", p.alphabet)) is Verdict.NONTRIVIAL
    assert o.is_trivial(parse_word("abBA", p.alphabet)) is Verdict.TRIVIAL
    assert o.canonical_form(parse_word("abBA", p.alphabet)) == ()


def test_free_reduction_scope():
    with pytest.raises(OracleScopeError):
        FreeReductionOracle(presentation("a", "aaa"))


def test_exponent_sum_verdicts(z3, z2):
    p3, o3 = z3
    assert isinstance(o3, ExponentSumOracle) and o3.moduli == (3,)
    assert o3.is_trivial(parse_word("aaa", p3.alphabet)) is Verdict.TRIVIAL
    assert o3.is_trivial(parse_word("aa", p3.alphabet)) is Verdict.NONTRIVIAL

    p2, o2 = z2
    assert isinstance(o2, ExponentSumOracle) and o2.moduli == (0, 0)
    ab = parse_word("ab", p2.alphabet)
    ba = parse_word("ba", p2.alphabet)
    assert o2.elements_equal(ab, ba) is Verdict.TRIVIAL
    assert o2.elements_equal(ab, parse_word("a", p2.alphabet)) is Verdict.NONTRIVIAL


def test_exponent_sum_canonical_form(z2):
    p, o = z2
    assert serialize(o.canonical_form(parse_word("ba", p.alphabet)), p.alphabet) == "ab"
    assert o.canonical_form(parse_word("abAB", p.alphabet)) == ()
    # exponents reduced modulo declared orders
    p3 = presentation("a", "aaa")
    o3 = ExponentSumOracle(p3, (3,))
    assert serialize(o3.canonical_form(parse_word("A", p3.alphabet)), p3.alphabet) == "aa"


def test_exponent_sum_scope_validation():
    with pytest.raises(OracleScopeError):
        ExponentSumOracle(presentation("ab", "aab"), (0, 0))
    with pytest.raises(OracleScopeError):
        ExponentSumOracle(presentation("a", "aaa"), (2,))
    with pytest.raises(OracleScopeError):
        ExponentSumOracle(presentation("ab", "abA"), (0, 1))
    # pure power with matching modulus is fine, including multiples
    ExponentSumOracle(presentation("a", "aaa", "aaaaaa"), (3,))


def test_alphabet_mismatch(z3):
    p, o = z3
    with pytest.raises(AlphabetMismatchError):
        o.is_trivial((1, 2))


def test_bounded_rewrite_reaches_commutator(z2):
    p, _ = z2
    br = BoundedRewriteOracle(p, length_cap=8, step_cap=10_000)
    assert br.is_trivial(parse_word("abAB", p.alphabet)) is Verdict.TRIVIAL
    assert br.canonical_form(parse_word("abAB", p.alphabet)) is None


def test_bounded_rewrite_honest_ignorance(z2):
    p, _ = z2
    br = BoundedRewriteOracle(p, length_cap=4, step_cap=50)
    # cannot decide the commutator with these caps, must not guess
    assert br.is_trivial(parse_word("aabAAb", p.alphabet)) is Verdict.UNKNOWN


def test_oracle_soundness_cross_check(z2):
    """Bounded rewrite must never claim Trivial against the exponent oracle."""
    p, expsum = z2
    br = BoundedRewriteOracle(p, length_cap=8, step_cap=400)
    for w in words_up_to(p.alphabet, 4):
        if br.is_trivial(w) is Verdict.TRIVIAL:
            assert expsum.is_trivial(w) is Verdict.TRIVIAL, w


def test_elements_equal_is_equivalence(z2):
    p, o = z2
    sample = [parse_word(t, p.alphabet) for t in ["", "ab", "ba", "aabb", "A", "bA"]]
    for w in sample:
        assert o.elements_equal(w, w) is Verdict.TRIVIAL
    for w1 in sample:
        for w2 in sample:
            assert o.elements_equal(w1, w2) == o.elements_equal(w2, w1)
            for w3 in sample:
                if (
                    o.elements_equal(w1, w2) is Verdict.TRIVIAL
                    and o.elements_equal(w2, w3) is Verdict.TRIVIAL
                ):
                    assert o.elements_equal(w1, w3) is Verdict.TRIVIAL


def test_canonical_form_respects_equality(z3, z2, f2):
    for p, o in (z3, z2, f2):
        for w in words_up_to(p.alphabet, 3):
            form = o.canonical_form(w)
            assert form is not None
            assert o.elements_equal(w, form) is Verdict.TRIVIAL


def test_infer_moduli():
    assert infer_exponent_moduli(presentation("a", "aaa")) == (3,)
    assert infer_exponent_moduli(presentation("ab", "abAB")) == (0, 0)
    assert infer_exponent_moduli(presentation("ab", "abAB", "aaa", "bb")) == (3, 2)


def test_choose_oracle_strategies():
    assert isinstance(choose_oracle(presentation("ab")), FreeReductionOracle)
    assert isinstance(choose_oracle(presentation("a", "aaa")), ExponentSumOracle)
    assert isinstance(
        choose_oracle(presentation("ab", "abAB", "aaa")), ExponentSumOracle
    )
    # zero-net-exponent relator without the commutator set: not visibly
    # a sum of cyclics, must fall back to the bounded search
    assert isinstance(choose_oracle(presentation("ab", "abab")), BoundedRewriteOracle)
    assert isinstance(
        choose_oracle(presentation("abc", "abAB", "acAC")), BoundedRewriteOracle
    )
