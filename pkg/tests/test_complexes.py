import random

import pytest

from echlab.complexes import (
    ChainHomology,
    GradedComplex,
    colimit_homology,
    combined_modulus,
    greedy_reduce,
    homology,
    long_exact_sequence,
    morse_reduce,
    parse_coefficients,
    sub_quotient,
    tensor,
    verify_complex,
)
from echlab.errors import ExactnessFailure, GradingMismatch, NotStabilized, NotSubcomplex
from echlab.hf import flavor_ses, window_complex
from echlab.linalg import IntMatrix
from echlab.ocomplex import canonical_matching, window
from echlab.samples import random_hfdata

import oracle


def interval():
    """Two vertices joined by an edge: d e = b - a."""
    return GradedComplex.from_boundaries(["a", "b", "e"], [0, 0, 1], 0, lambda x: {"b": 1, "a": -1} if x == "e" else {})


def circle():
    return GradedComplex.from_boundaries(["v", "e"], [0, 1], 0, lambda x: {})


def rp2():
    """Cellular chains of RP^2: e0, e1, e2 with d e2 = 2 e1."""
    return GradedComplex.from_boundaries(["e0", "e1", "e2"], [0, 1, 2], 0, lambda x: {"e1": 2} if x == "e2" else {})


def test_simple_homologies():
    assert homology(interval(), 0).iso_type() == (1, ())
    assert homology(interval(), 1).is_trivial()
    H = ChainHomology(rp2())
    assert H.group(0).iso_type() == (1, ())
    assert H.group(1).iso_type() == (0, (2,))
    assert H.group(2).is_trivial()
    assert H.field_rank(1, 2) == 1 and H.field_rank(2, 2) == 1 and H.field_rank(1, 0) == 0


def test_generators_are_cycles_and_coordinates_work():
    H = ChainHomology(rp2())
    G = H.group(1)
    (z,) = G.all_generators()
    assert rp2().d(z) == {}
    assert G.coordinates({"e1": 3}) == (1,)
    assert H.is_boundary({"e1": 2}, 1)


def test_from_boundaries_rejects_escaping_terms():
    with pytest.raises(NotSubcomplex):
        GradedComplex.from_boundaries(["x"], [1], 0, lambda x: {"y": 1})


def test_odd_modulus_rejected():
    with pytest.raises(GradingMismatch):
        GradedComplex(["x"], [0], 3, IntMatrix.zeros(1, 1))
    assert combined_modulus(4, 0) == 4 and combined_modulus(8, 4) == 4
    with pytest.raises(GradingMismatch):
        combined_modulus(4, 6)


def test_verify_complex_detects_errors():
    good = rp2()
    assert verify_complex(good)
    bad_degree = GradedComplex(["x", "y"], [0, 0], 0, IntMatrix.from_dense([[0, 1], [0, 0]]))
    rep = verify_complex(bad_degree)
    assert not rep and rep.witness == "y"
    bad_square = GradedComplex(["x", "y", "z"], [0, 1, 2], 0, IntMatrix.from_dense([[0, 1, 0], [0, 0, 1], [0, 0, 0]]))
    assert not verify_complex(bad_square)


def test_kunneth_on_tensor_with_oracle():
    C = tensor(rp2(), rp2())
    assert verify_complex(C)
    H = ChainHomology(C)
    ref = oracle.homology_table(C.basis, lambda c: C.grading[C.index[c]], C.boundary)
    for k in range(5):
        G = H.group(k)
        assert (G.free_rank, list(G.torsion)) == ref[k]
    # Kunneth: H_1 = Z/2 + Z/2 from the two H_1 factors, H_3 = Tor(Z/2, Z/2) = Z/2
    assert H.group(1).iso_type() == (0, (2, 2))
    assert H.group(3).iso_type() == (0, (2,))


def test_greedy_and_morse_reduce_agree_with_oracle():
    C = window(6)
    ref = oracle.o_window_homology(6)
    for red in (greedy_reduce(C), morse_reduce(C, canonical_matching(C.basis))):
        assert verify_complex(red.reduced)
        H = ChainHomology(red.reduced)
        for k, (free, tors) in ref.items():
            assert H.group(k).iso_type() == (free, tuple(tors))


def test_les_of_random_flavor_split_is_exact():
    rng = random.Random(7)
    for _ in range(15):
        hf = random_hfdata(rng, max_gens=4)
        row = long_exact_sequence(flavor_ses(hf, -2, 2))
        assert not row.exactness_failures()


def test_les_detects_a_broken_map():
    row = long_exact_sequence(flavor_ses(random_hfdata(random.Random(1), max_gens=3, p_choices=(0,)), -2, 2))
    idx = next(i for i, m in enumerate(row.maps) if not m.is_zero())
    row.maps[idx] = row.maps[idx].scale(0)
    with pytest.raises(ExactnessFailure):
        row.check()


def test_sub_quotient_requires_subcomplex():
    with pytest.raises(NotSubcomplex):
        sub_quotient(interval(), lambda lab: lab == "e")


def test_colimit_of_o_tower():
    tower = [window(L) for L in range(1, 9)]
    r0 = colimit_homology(tower, 0)
    r1 = colimit_homology(tower, 1)
    assert r0.group.iso_type() == (1, ())
    assert r1.group.iso_type() == (1, ())
    with pytest.raises(NotStabilized):
        colimit_homology(tower[:5], 1)


def test_parse_coefficients():
    assert parse_coefficients("z") is None and parse_coefficients("q") == 0 and parse_coefficients("f3") == 3
    with pytest.raises(ValueError):
        parse_coefficients("f4")
    with pytest.raises(ValueError):
        parse_coefficients("r")


def test_window_complex_homology_matches_oracle_on_random_inputs(tmp_path):
    from echlab.io import InputDocument, write_input

    rng = random.Random(19)
    for n in range(20):
        hf = random_hfdata(rng, max_gens=5)
        path = tmp_path / f"r{n}.json"
        write_input(path, InputDocument.from_hfdata(hf))
        ref = oracle.hf_flavor_homology(path, "inf", (-2, 2))
        H = ChainHomology(window_complex(hf, -2, 2))
        for k, (free, tors) in ref.items():
            assert H.group(k).iso_type() == (free, tuple(tors)), (n, k)
