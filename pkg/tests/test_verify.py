import json
import random

import pytest

from echlab import verify as V
from echlab.hf import HFData
from echlab.ocomplex import MUTATIONS
from echlab.samples import random_hfdata

from conftest import CORPUS_NAMES, corpus_genus, corpus_hf


def test_limit_check_passes_and_reports_generators():
    rep = V.check_lemma_2_5(8)
    assert rep.passed, rep.message
    doc = rep.to_json()
    json.dumps(doc)
    assert doc["verdict"] == "pass"


def test_limit_check_needs_enough_levels():
    rep = V.check_lemma_2_5(7)
    assert rep.verdict == V.UNSTABLE


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_collapse_on_corpus(name):
    rep = V.check_collapse(corpus_hf(name), corpus_genus(name))
    assert rep.passed, rep.message


def test_collapse_below_the_decoupling_level_is_undecided():
    rep = V.check_collapse(corpus_hf("trivial"), 2, L=6)
    assert rep.verdict == V.UNSTABLE


def test_collapse_on_random_inputs():
    rng = random.Random(21)
    for _ in range(6):
        hf = random_hfdata(rng, max_gens=4)
        assert V.check_collapse(hf, 1, window_=(-1, 1)).passed


@pytest.mark.parametrize("name", sorted(MUTATIONS))
def test_each_mutation_is_caught(name):
    rules = MUTATIONS[name]
    lemma = V.check_lemma_2_5(8, rules)
    collapse = V.check_collapse(corpus_hf("trivial"), 1, rules=rules)
    assert lemma.verdict == V.FAIL or collapse.verdict == V.FAIL
    assert not (lemma.passed and collapse.passed)


@pytest.mark.parametrize("name", CORPUS_NAMES)
@pytest.mark.parametrize("coeff", [None, "f2", "q"])
def test_ladder_on_corpus(name, coeff):
    rep = V.check_theorem_2_4(corpus_hf(name), corpus_genus(name), coeff)
    assert rep.passed, rep.message


def test_ladder_on_random_inputs():
    rng = random.Random(13)
    for _ in range(8):
        hf = random_hfdata(rng, max_gens=4)
        rep = V.check_theorem_2_4(hf, rng.randint(1, 2), window_=(-2, 2))
        assert rep.passed, rep.message


def test_ladder_rejects_invalid_input():
    bad = HFData.from_edges(["x", "y"], 0, {"x": 0, "y": 0}, [("x", "y", 0, 1)])
    assert V.check_theorem_2_4(bad, 1).verdict == V.FAIL


def test_ladder_fails_when_the_collapse_is_incomplete(monkeypatch):
    real = V.product_matching
    monkeypatch.setattr(V, "product_matching", lambda T: real(T)[:-1])
    rep = V.check_theorem_2_4(corpus_hf("trivial"), 1)
    assert rep.verdict == V.FAIL


def test_ladder_fails_with_a_wrong_u_map(monkeypatch):
    from echlab.complexes import GradedEndo

    real = V.u_map_ech
    monkeypatch.setattr(V, "u_map_ech", lambda T: GradedEndo(real(T).matrix.scale(2), -2, "commutes"))
    rep = V.check_theorem_2_4(corpus_hf("trivial"), 1)
    assert rep.verdict == V.FAIL


@pytest.mark.parametrize("name", CORPUS_NAMES)
def test_module_structure_on_corpus(name):
    rep = V.check_module_structure(corpus_hf(name), corpus_genus(name))
    assert rep.passed, rep.message


def test_module_structure_with_actions():
    rng = random.Random(31)
    for _ in range(5):
        hf = random_hfdata(rng, max_gens=5, with_action=True)
        assert V.check_module_structure(hf, 1, (-2, 2)).passed


def test_short_limit_tower_is_undecided():
    assert V.check_lemma_2_5(2).verdict == V.UNSTABLE


def test_ladder_on_acyclic_input_with_two_handles():
    rep = V.check_theorem_2_4(corpus_hf("acyclic"), 2)
    assert rep.passed, rep.message
    from echlab.ech import ech_flavor_homology

    res = ech_flavor_homology(corpus_hf("acyclic"), 2, "inf")
    assert all(res.table[k].is_trivial() for k in res.interior)
