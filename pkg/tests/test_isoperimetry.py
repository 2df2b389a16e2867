import json

import pytest
from fractions import Fraction

from ggtlab.isoperimetry import (
    BudgetExceededError,
    Factor,
    NotIrreducibleError,
    NotTrivialError,
    RelatorProduct,
    SearchBudget,
    area,
    evaluate_product,
    hyperbolicity_scan,
    product_cost,
)
from ggtlab.presentations import presentation
from ggtlab.words import EMPTY, concat, free_reduce, invert, parse_word, serialize

from _oracles import naive_area


def test_evaluate_product_examples(z3, z2):
    p3, _ = z3
    assert serialize(evaluate_product(p3, RelatorProduct((Factor(EMPTY, 0, 1),))), p3.alphabet) == "aaa"
    p2, _ = z2
    assert serialize(evaluate_product(p2, RelatorProduct((Factor(EMPTY, 0, 1),))), p2.alphabet) == "abAB"
    assert evaluate_product(p2, RelatorProduct()) == EMPTY


def test_product_cost_examples(z3, z2):
    p3, _ = z3
    assert product_cost(p3, RelatorProduct((Factor(EMPTY, 0, 1),))) == (0, 9)
    assert product_cost(p3, RelatorProduct((Factor(EMPTY, 0, 2),))) == (0, 18)
    p2, _ = z2
    u = parse_word("a", p2.alphabet)
    assert product_cost(p2, RelatorProduct((Factor(u, 0, 1),))) == (1, 16)


def test_area_examples(z3, z2):
    p3, o3 = z3
    cert = area(p3, o3, parse_word("aaa", p3.alphabet))
    assert (cert.value, cert.exact) == (9, True)

    assert area(p3, o3, EMPTY).value == 0
    assert area(p3, o3, EMPTY).exact

    p2, o2 = z2
    cert = area(p2, o2, parse_word("abAB", p2.alphabet))
    assert (cert.value, cert.exact) == (16, True)


def test_area_agrees_with_naive_enumerator(z3):
    p, o = z3
    for m in (1, 2):
        w = parse_word("a" * (3 * m), p.alphabet)
        cert = area(p, o, w)
        assert cert.exact
        assert naive_area(p, w, max_area=cert.value) == cert.value

    pz = presentation("a", "aa")
    oz = __import__("ggtlab").choose_oracle(pz)
    for text in ("aa", "aaaa"):
        w = parse_word(text, pz.alphabet)
        cert = area(pz, oz, w)
        assert cert.exact
        assert naive_area(pz, w, max_area=cert.value) == cert.value


def test_witness_validity(z3, z2):
    for (p, o), texts in ((z3, ["aaa", "aaaaaa"]), (z2, ["abAB", "aabABA"])):
        for text in texts:
            w = parse_word(text, p.alphabet)
            if free_reduce(w) != w:
                continue
            cert = area(p, o, w)
            assert evaluate_product(p, cert.witness) == w
            cl, rc = product_cost(p, cert.witness)
            assert max(cl, rc) <= cert.value


def test_area_error_paths(z3):
    p, o = z3
    with pytest.raises(NotTrivialError):
        area(p, o, parse_word("aa", p.alphabet))
    with pytest.raises(NotIrreducibleError):
        area(p, o, parse_word("aAaaa", p.alphabet))
    with pytest.raises(BudgetExceededError):
        area(p, o, parse_word("aaa", p.alphabet), budget=SearchBudget(max_area=8))


def test_budget_exhaustion_reports_inexact(z3):
    p, o = z3
    w = parse_word("aaaaaa", p.alphabet)
    # an exhausted node budget with no witness at all is an error
    with pytest.raises(BudgetExceededError):
        area(p, o, w, budget=SearchBudget(max_nodes=2))
    # a factor cap that may have hidden cheaper representations forfeits exactness
    cert = area(p, o, w, budget=SearchBudget(max_factors=1))
    assert cert.value == 18
    assert not cert.exact
    assert cert.value >= cert.lower_bound


def test_conjugation_cost_shift(z2):
    p, o = z2
    rp = RelatorProduct((Factor(parse_word("a", p.alphabet), 0, 1), Factor(EMPTY, 0, -1)))
    g = parse_word("bA", p.alphabet)
    shifted = RelatorProduct(tuple(Factor(concat(g, f.conjugator), f.relator, f.power) for f in rp.factors))
    base = evaluate_product(p, rp)
    assert evaluate_product(p, shifted) == free_reduce(concat(g, base, invert(g)))
    cl0, rc0 = product_cost(p, rp)
    cl1, rc1 = product_cost(p, shifted)
    assert cl1 == cl0 + len(rp.factors) * len(g)
    assert rc1 == rc0


def test_area_symmetric_under_inversion(z3):
    p, o = z3
    for text in ("aaa", "aaaaaa", "aaaaaaaaa", "AAA", "AAAAAA", "AAAAAAAAA"):
        w = parse_word(text, p.alphabet)
        cert = area(p, o, w)
        cert_inv = area(p, o, invert(w))
        assert cert.value == cert_inv.value
        assert cert.exact and cert_inv.exact


def test_scan_z3(z3):
    p, o = z3
    report = hyperbolicity_scan(p, o, max_len=12)
    assert not report.vacuous
    assert report.sup_ratio == Fraction(3)
    assert report.all_exact
    lengths = sorted(e.length for e in report.entries)
    assert lengths == [3, 3, 6, 6, 9, 9, 12, 12]
    for e in report.entries:
        assert e.area == 3 * e.length
        assert e.ratio == Fraction(3)


def test_scan_free_group_vacuous(f2):
    p, o = f2
    report = hyperbolicity_scan(p, o, max_len=5)
    assert report.vacuous
    assert report.sup_ratio is None
    assert report.entries == ()


def test_scan_z2(z2):
    p, o = z2
    report = hyperbolicity_scan(p, o, max_len=4)
    assert report.sup_ratio == Fraction(4)
    assert report.all_exact
    assert len(report.entries) == 8
    assert all(e.length == 4 and e.area == 16 for e in report.entries)


def test_scan_symmetry_flag(z2):
    p, o = z2
    full = hyperbolicity_scan(p, o, max_len=4)
    folded = hyperbolicity_scan(p, o, max_len=4, symmetry=True)
    assert folded.sup_ratio == full.sup_ratio == Fraction(4)
    assert len(folded.entries) == 2  # one per rotation orbit


def test_scan_undecided_bucket(z2):
    from ggtlab.presentations import BoundedRewriteOracle

    p, _ = z2
    br = BoundedRewriteOracle(p, length_cap=4, step_cap=30)
    report = hyperbolicity_scan(p, br, max_len=2)
    # with these caps nothing of length <= 2 is decided trivial
    assert report.vacuous
    assert len(report.undecided) > 0


def test_scan_report_serializes(z3):
    p, o = z3
    report = hyperbolicity_scan(p, o, max_len=6)
    doc = report.to_dict(p)
    blob = json.dumps(doc, sort_keys=True)
    assert json.loads(blob)["sup_ratio"] == {"numerator": 3, "denominator": 1}


def test_monotone_deepening_vs_naive(zline):
    """The search never claims a value the literal enumerator can beat."""
    p3 = presentation("a", "aaa")
    import ggtlab

    o3 = ggtlab.choose_oracle(p3)
    w = parse_word("aaaaaa", p3.alphabet)
    cert = area(p3, o3, w)
    assert cert.exact
    assert naive_area(p3, w, max_area=cert.value - 1) is None
    assert naive_area(p3, w, max_area=cert.value) == cert.value
