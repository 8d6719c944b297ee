"""Small worked examples, one per operation, with hand-checkable values."""
import itertools
from fractions import Fraction as F

import pytest

from liquidproxy import combinatorics as comb
from liquidproxy.aggregation import (MAJ, QuotaSpec, Structure, check_property, constant_abstain, majority,
                                     majority_quota_band, quota_rule, undecisiveness, verify_lemma1)
from liquidproxy.bdp import DelegationStructure, bdp_step, run, theorem3_condition, transform_then_aggregate
from liquidproxy.default import DefaultEntry as E, decompose, pv_maj_default, translate_t_prime
from liquidproxy.logic import (Constraint, Literal as L, is_evenly_negatable, is_path_connected,
                               minimal_inconsistent_sets)
from liquidproxy.proxy import PV_MAJ, Delegate as D, DelegationGraph, embed_s, individually_rational, translate_t

PQR = ["p", "q", "r"]
DILEMMA = Constraint.parse("(p & q) -> r", PQR)
CHAIN = Constraint.parse("(r -> q) & (q -> p)", PQR)
TOP1 = Constraint.tautology(1)


def test_models():
    assert len(Constraint.tautology(2).models()) == 4
    assert set(DILEMMA.models()) == set(itertools.product((0, 1), repeat=3)) - {(1, 1, 0)}
    assert Constraint.parse("p & !p", ["p"]).models() == []


def test_consistency_and_entailment():
    assert not DILEMMA.consistent([L(0, True), L(1, True), L(2, False)])
    assert not CHAIN.consistent([L(2, True), L(0, False)])
    assert CHAIN.entails([L(2, True)], L(0, True))
    assert not Constraint.tautology(2).entails([L(0, True)], L(1, True))


def test_minimal_inconsistent_examples():
    top = minimal_inconsistent_sets(Constraint.tautology(2))
    assert {frozenset(s) for s in top} == {frozenset({L(i, True), L(i, False)}) for i in range(2)}
    assert all(len(s) == 2 for s in minimal_inconsistent_sets(CHAIN))


def test_negation_and_paths_edge_cases():
    assert not is_evenly_negatable(Constraint.tautology(1))
    assert not is_evenly_negatable(Constraint.parse("p", ["p"]))
    assert not is_path_connected(Constraint.tautology(2))
    assert not is_path_connected(Constraint.tautology(1))


def test_opinion_examples():
    assert CHAIN.opinion_status((None, 1, 1)) == (True, False)
    assert DILEMMA.opinion_status((1, 1, 0))[0] is False


@pytest.mark.parametrize("col, out", [((1, 1, 0), 1), ((1, 0, None), None), ((None,) * 3, None)])
def test_majority_examples(col, out):
    assert majority(tuple((v,) for v in col)) == (out,)


def test_unanimity_examples():
    rule = quota_rule(QuotaSpec.symmetric(1, 1))
    assert rule(((1,), (1,), (1,))) == (1,)
    assert rule(((1,), (1,), (0,))) == (None,)


def test_band_examples():
    assert majority_quota_band(3) == (F(1, 2), F(2, 3))
    assert majority_quota_band(1) == (F(1, 2), 1)
    assert majority_quota_band(10) == (F(1, 2), F(11, 20))


def test_undecisiveness_examples():
    s2 = Structure.independent(2, 1)
    assert undecisiveness(MAJ, s2, 0) == 3
    # two voters: unanimity needs both, exactly like maj, so 3 rather than 5
    assert undecisiveness(quota_rule(QuotaSpec.symmetric(1, 1)), s2, 0) == 3
    assert undecisiveness(MAJ, Structure.independent(1, 1), 0) == 1


def test_grid_examples():
    rep3 = verify_lemma1(Structure.independent(3, 1), [F(3, 5), F(2, 3), F(3, 4), F(1)])
    assert rep3["argmin"] == [[F(3, 5), F(2, 3)]]
    # with two voters every quota above 1/2 demands both, so 1 ties with 2/3 and 3/4
    rep2 = verify_lemma1(Structure.independent(2, 1), [F(2, 3), F(3, 4), F(1)])
    assert rep2["argmin"] == [[F(2, 3), F(3, 4), F(1)]]
    rep1 = verify_lemma1(Structure.independent(1, 1), [F(3, 5), F(3, 4), F(1)])
    assert rep1["argmin"] == [[F(3, 5), F(3, 4), F(1)]] and rep1["holds"]


def test_property_examples():
    assert check_property(MAJ, "anonymous", Structure.independent(3, 1)).holds
    assert not check_property(constant_abstain(1), "responsive", Structure.independent(2, 1)).holds
    res = check_property(MAJ, "rational", Structure(3, DILEMMA))
    assert not res.holds
    assert majority(((1, 1, 1), (1, 0, 0), (0, 1, 0))) == (1, 1, 0)


def test_graph_examples():
    g = DelegationGraph([1, 1, 0])  # agents 0..2: 0 -> 1, 1 votes, 2 -> 0
    assert g.guru_set == [1] and g.gurus == (1, 1, 1)
    assert DelegationGraph([1, 0]).void
    chain = DelegationGraph([1, 2, 2])
    assert chain.guru(0) == 2 and chain.weights == (1, 2, 3)
    assert chain.viscous_weight(2) == F(5, 2)
    star = DelegationGraph([4, 4, 4, 4, 4])
    assert star.weight(4) == 5
    assert DelegationGraph([0, 0, 0]).viscous_weight(0) == 3
    assert DelegationGraph([0]).viscous_weight(0) == 1


def test_pv_examples():
    assert PV_MAJ(((1,), (D(0),), (0,))) == (1,)
    assert PV_MAJ(((D(1),), (D(0),))) == (None,)
    assert PV_MAJ(((1,), (0,))) == (None,)
    assert translate_t(((D(1),), (1,))) == ((1,), (1,))


def test_embed_examples():
    assert embed_s(((1, 0), (0, 1))) == ((1, 0), (0, 1))
    ext = embed_s(((None,), (1,)), dummy=True)
    assert len(ext) == 3 and ext[0] == (D(2),) and ext[2] == (D(0),)


def test_rationality_examples():
    prof = ((D(1), D(1), 1), (1, 1, 1))
    assert individually_rational(prof, 0, DILEMMA)


def test_default_examples():
    prof = ((E(0, 1),), (E(1, 1),), (E(0, 0),))
    d = decompose(prof, 0)
    assert d.cycles == [(1,)] and d.weight == [3]
    assert pv_maj_default(prof) == (1,)
    pair = ((E(1, 1),), (E(0, 0),), (E(1, 0),))
    assert decompose(pair, 0).weight == [3]
    assert pv_maj_default(pair) == (None,) and translate_t_prime(pair) == ((None,),) * 3
    loops = ((E(1, 0),), (E(0, 1),))
    assert pv_maj_default(loops) == (None,)
    feed = ((E(1, 1),), (E(1, 2),), (E(0, 0),), (E(0, 0),))
    assert translate_t_prime(feed)[3] == (1,)


def test_bdp_examples():
    G = DelegationStructure([[1, 1]])
    assert bdp_step(((0,), (1,)), G, TOP1) == ((1,), (1,))
    iff = Constraint.parse("p <-> q", ["p", "q"])
    G2 = DelegationStructure([[1, 1, 2], [2, 1, 2]])
    assert bdp_step(((0, 0), (1, 1), (0, 0)), G2, iff)[0] == (0, 0)
    assert run(((1,), (1,)), DelegationStructure([[0, 1]]), TOP1).steps == 0
    assert theorem3_condition(DelegationStructure([[1, 2, 0]]), ((1,), (1,), (1,)))
    assert not theorem3_condition(DelegationStructure([[1, 0]]), ((1,), (0,)))
    split = DelegationStructure([[1, 0, 0]])
    assert transform_then_aggregate(((1,), (0,), (1,)), split, TOP1) == (None,)


def test_combinatorics_examples():
    assert comb.f(0, 0) == 1 and comb.f(2, 1) == 2 and comb.f(2, 2) == 1 and comb.f(4, 0) == 0
    assert comb.check_identity_total(8)
    h = comb.count_hung_even(2)
    assert (h.count, h.probability) == (2, F(2, 16))
    assert comb.count_hung_even(1).count == 0
    assert comb.prob_guru_free(1).exact == 0
    assert comb.prob_guru_free(4).exact == F(81, 625)
    assert comb.prob_guru_free(1000).value == pytest.approx(0.135335, abs=1e-5)


def test_mc_examples():
    est = comb.mc_guru_free(4, comb.McConfig(10 ** 6, seed=1))
    assert abs(est.estimate - 0.1296) <= 5 * est.stderr
    est = comb.mc_all_abstain_default(2, comb.McConfig(10 ** 6, seed=2))
    assert abs(est.estimate - 0.125) <= 5 * est.stderr
    assert comb.mc_all_abstain_default(1, comb.McConfig(1000, seed=3)).hits == 0
