import itertools

import pytest
from hypothesis import given, settings, strategies as st

from liquidproxy.logic import (TOP, And, Atom, Constraint, EnumerationLimitError, FormulaSyntaxError,
                               Literal, Not, classify_agenda, conj, disj, evaluate, format_formula,
                               iff, implies, is_evenly_negatable, is_path_connected, is_simple,
                               minimal_inconsistent_sets, parse_formula)

from conftest import brute_models

L = Literal


def lits(*spec):
    return [L(i, bool(v)) for i, v in spec]


# -- parsing -------------------------------------------------------------------

@pytest.mark.parametrize("text, labels, expected", [
    ("p", ["p"], Atom(0)),
    ("!p", ["p"], Not(Atom(0))),
    ("p & q", ["p", "q"], And(Atom(0), Atom(1))),
    ("T", [], TOP),
    ("F", [], Not(TOP)),
])
def test_parse_simple(text, labels, expected):
    assert parse_formula(text, labels) == expected


def test_connective_semantics_match_truth_tables():
    p, q = Atom(0), Atom(1)
    for v in itertools.product((0, 1), repeat=2):
        a, b = bool(v[0]), bool(v[1])
        assert evaluate(disj(p, q), v) == (a or b)
        assert evaluate(implies(p, q), v) == ((not a) or b)
        assert evaluate(iff(p, q), v) == (a == b)
        assert evaluate(conj(p, q), v) == (a and b)


def test_precedence_and_associativity():
    labels = ["p", "q", "r"]
    # & binds tighter than |, which binds tighter than ->; -> is right-associative
    a = Constraint.parse("p | q & r", labels)
    b = Constraint.parse("p | (q & r)", labels)
    assert a.mask == b.mask
    c = Constraint.parse("p -> q -> r", labels)
    d = Constraint.parse("p -> (q -> r)", labels)
    assert c.mask == d.mask


@pytest.mark.parametrize("bad", ["p &", "(p", "p q", "&", "p -> ", ")"])
def test_syntax_errors(bad):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(bad, ["p", "q"])


def test_unknown_label_rejected():
    with pytest.raises(FormulaSyntaxError):
        Constraint.parse("p & z", labels=["p", "q"])


def test_format_roundtrip():
    labels = ["p", "q", "r"]
    g = Constraint.parse("(p & q) -> r", labels)
    again = Constraint.parse(format_formula(g.formula, labels), labels)
    assert again.mask == g.mask


def test_enumeration_cap():
    Constraint.tautology(20)
    with pytest.raises(EnumerationLimitError):
        Constraint.tautology(21)


# -- models vs an independent oracle ---------------------------------------------

FORMULAS = ["(p & q) -> r", "(r -> q) & (q -> p)", "p <-> !q", "T", "p | q | r", "!(p & q & r)"]


@pytest.mark.parametrize("text", FORMULAS)
def test_models_match_truth_table(text):
    g = Constraint.parse(text, ["p", "q", "r"])
    assert sorted(g.models()) == brute_models(g.formula, 3)


def test_model_counts_frozen():
    labels = ["p", "q", "r"]
    counts = {t: len(Constraint.parse(t, labels).models()) for t in FORMULAS}
    assert counts == {"(p & q) -> r": 7, "(r -> q) & (q -> p)": 4, "p <-> !q": 4, "T": 8,
                      "p | q | r": 7, "!(p & q & r)": 7}


formulas = st.recursive(
    st.sampled_from([Atom(0), Atom(1), Atom(2), TOP]),
    lambda sub: st.one_of(st.builds(Not, sub), st.builds(And, sub, sub)),
    max_leaves=8)


@settings(max_examples=150, deadline=None)
@given(formulas)
def test_models_property(f):
    assert sorted(Constraint(f, 3).models()) == brute_models(f, 3)


@settings(max_examples=100, deadline=None)
@given(formulas, st.lists(st.tuples(st.integers(0, 2), st.booleans()), max_size=3))
def test_consistency_against_oracle(f, raw):
    g = Constraint(f, 3)
    ls = [L(i, b) for i, b in raw]
    expect = any(all(v[l.issue] == int(l.positive) for l in ls) for v in brute_models(f, 3))
    assert g.consistent(ls) == expect


def test_entailment():
    g = Constraint.parse("(p & q) -> r", ["p", "q", "r"])
    assert g.entails(lits((0, 1), (1, 1)), L(2, True))
    assert not g.entails(lits((0, 1)), L(2, True))
    assert g.entails(lits((0, 1), (2, 0)), L(1, False))


# -- opinions ------------------------------------------------------------------

def test_opinion_status_discursive_dilemma():
    g = Constraint.parse("(p & q) -> r", ["p", "q", "r"])
    assert g.opinion_status((1, 1, 0)) == (False, True)  # inconsistent; closure is vacuous
    assert g.opinion_status((1, 1, None)) == (True, False)  # consistent but misses r
    assert g.opinion_status((1, 1, 1)) == (True, True)
    assert g.opinion_status((None, None, None)) == (True, True)


def test_rational_opinions_tautology_is_full_cube():
    g = Constraint.tautology(2)
    assert len(g.rational_opinions) == 9
    assert g.rational_opinions[0] == (0, 0)
    assert g.rational_opinions[-1] == (None, None)


def test_rational_opinion_count_frozen():
    # oracle: brute-force check of consistency + deductive closure on all 27 opinions
    g = Constraint.parse("(p & q) -> r", ["p", "q", "r"])
    models = brute_models(g.formula, 3)

    def rational(o):
        ext = [v for v in models if all(x is None or x == v[i] for i, x in enumerate(o))]
        if not ext:
            return False
        return all(x is not None or len({v[i] for v in ext}) == 2 for i, x in enumerate(o))

    expected = sum(rational(o) for o in itertools.product((0, 1, None), repeat=3))
    assert expected == 23  # (1,1,0), (1,1,*), (1,*,0), (*,1,0) are out
    assert len(g.rational_opinions) == expected


# -- agenda classes --------------------------------------------------------------

def test_minimal_inconsistent_sets():
    g = Constraint.parse("(p & q) -> r", ["p", "q", "r"])
    mis = {frozenset(s) for s in minimal_inconsistent_sets(g)}
    expected = {frozenset({L(i, True), L(i, False)}) for i in range(3)}
    expected.add(frozenset({L(0, True), L(1, True), L(2, False)}))
    assert mis == expected


@pytest.mark.parametrize("text, labels, simple, even, path", [
    ("T", ["p", "q"], True, False, False),
    ("(r -> q) & (q -> p)", ["p", "q", "r"], True, True, False),
    ("(p & q) -> r", ["p", "q", "r"], False, True, False),
    # only size-2 inconsistencies: no even negation helps and p never reaches !p
    ("p <-> q", ["p", "q"], True, False, False),
    ("(p <-> q) & (q <-> r)", ["p", "q", "r"], True, False, False),
    # parity: every literal reaches every other, but negating two keeps the parity
    ("p <-> !(q <-> r)", ["p", "q", "r"], False, False, True),
])
def test_agenda_classes(text, labels, simple, even, path):
    g = Constraint.parse(text, labels)
    assert (is_simple(g), is_evenly_negatable(g), is_path_connected(g)) == (simple, even, path)


def test_classify_report_is_json_ready():
    import json
    rep = classify_agenda(Constraint.parse("(p & q) -> r"))
    json.dumps(rep)
    assert rep["issues"] == ["p", "q", "r"] and rep["models"] == 7
