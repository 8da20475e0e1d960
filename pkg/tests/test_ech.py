import random

import pytest

from echlab.complexes import GradedComplex, tensor, verify_complex
from echlab.ech import (
    EchGenerator,
    assemble,
    build_balanced,
    build_ech,
    build_vhat_model,
    ech_flavor_homology,
    handle_stability,
    handle_tuples,
    h1_map_ech,
    t_action,
    u_map_ech,
)
from echlab.errors import NotSubcomplex
from echlab.hf import HFData, window_complex
from echlab.ocomplex import OLabel, balanced_window, window
from echlab.samples import random_hfdata

from conftest import corpus_hf


def test_handle_tuple_counts():
    # g = 3 tuples of total level < L; L = 1 only has the all-(0,0) tuple
    assert [len(handle_tuples(3, L)) for L in range(1, 7)] == [1, 7, 31, 105, 294, 714]
    assert len(handle_tuples(1, 5)) == len(window(5))


@pytest.mark.parametrize("g", [1, 2])
def test_assembly_agrees_with_iterated_tensor_product(g):
    hf = random_hfdata(random.Random(4), max_gens=3, p_choices=(0,))
    base = window_complex(hf, -1, 1)
    E = build_balanced(hf, g, 2, (-1, 1)).complex
    T = base
    for _ in range(g):
        T = tensor(T, balanced_window(2))

    def key(lab):
        # ((((x, i), h1), h2) ...) -> EchGenerator
        hs = []
        while not (isinstance(lab, tuple) and len(lab) == 2 and isinstance(lab[0], str)):
            lab, h = lab
            hs.append(h)
        return EchGenerator(lab[0], lab[1], tuple(reversed(hs)))

    assert sorted(E.basis) == sorted(key(b) for b in T.basis)
    for lab in T.basis:
        want = {key(t): v for t, v in T.boundary(lab).items()}
        assert E.boundary(key(lab)) == want


def test_random_assemblies_square_to_zero():
    rng = random.Random(8)
    for _ in range(10):
        hf = random_hfdata(rng)
        for g, L in ((1, 6), (2, 4), (3, 3)):
            assert verify_complex(build_ech(hf, g, L, (-2, 2)).complex)


def test_escaping_handles_rejected():
    base = GradedComplex([("x", 0)], [0], 0, window(1).differential)
    with pytest.raises(NotSubcomplex):
        assemble(base, [(OLabel(0, 1),)])


def test_actions_on_the_ech_complex():
    hf = corpus_hf("g2_stress")
    T = build_balanced(hf, 2, 1, (-2, 2))
    assert t_action(T).check(T.complex)
    assert u_map_ech(T).check(T.complex)
    assert h1_map_ech(T, 0).check(T.complex)


def test_vhat_model_has_zero_handle_differential():
    hf = corpus_hf("trivial")
    V = build_vhat_model(hf, 2, (0, 0))
    assert len(V.complex) == 4 and V.complex.differential.is_zero()


@pytest.mark.parametrize("g, N", [(1, 2), (1, 4), (2, 2), (2, 3), (3, 2)])
def test_handle_stability(g, N):
    hs = handle_stability(g, N)
    assert hs.ok
    # the handle factors have the homology of g circles
    from math import comb

    assert dict(hs.groups) == {k: (comb(g, k), ()) for k in range(2 * g + 1)}


def test_flavor_homology_trivial_input():
    hf = corpus_hf("trivial")
    res = ech_flavor_homology(hf, 1, "inf", 6, (-3, 3))
    assert res.status == "stable"
    for k in res.interior:
        assert res.table[k].iso_type() == (1, ())
    minus = ech_flavor_homology(hf, 1, "minus", 6, (-3, 3))
    assert minus.table[0].is_trivial() and minus.table[-1].iso_type() == (1, ())
    f2 = ech_flavor_homology(hf, 1, "inf", 6, (-3, 3), "f2")
    assert all(f2.table[k] == res.table[k].free_rank for k in res.interior)


def test_flavor_homology_of_acyclic_input_vanishes_inside():
    res = ech_flavor_homology(corpus_hf("acyclic"), 1, "inf", 6, (-3, 3))
    assert res.interior and all(res.table[k].is_trivial() for k in res.interior)


def test_torsion_input_is_window_dependent():
    res = ech_flavor_homology(corpus_hf("p4_torsion"), 1, "inf", 6, (-3, 3))
    assert res.status == "window-dependent"
    assert all(res.table[k].free_rank == 0 and set(res.table[k].torsion) == {2} for k in range(4))


def test_unknown_flavor():
    with pytest.raises(ValueError):
        ech_flavor_homology(HFData.from_edges(["x"], 0, {"x": 0}, []), 1, "hat")
