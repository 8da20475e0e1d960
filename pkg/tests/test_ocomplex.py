import pytest

from echlab.complexes import ChainHomology, morse_reduce, verify_complex
from echlab.errors import NotStabilized
from echlab.ocomplex import (
    BOTH,
    CRITICAL,
    OLabel,
    balanced_labels,
    balanced_window,
    boundary_star,
    canonical_matching,
    limit_homology,
    o_partner,
    vhat_generator,
    window,
    window_labels,
    window_size,
)
from echlab.reduction import check_matching

import oracle


def test_rules_match_the_four_cases():
    assert boundary_star((3, 0)) == {}
    assert boundary_star((0, 1)) == {OLabel(0, 0): 1, OLabel(1, 0): 1}
    assert boundary_star((0, -1)) == {OLabel(0, 0): 1, OLabel(-1, 0): 1}
    assert boundary_star((2, BOTH)) == {OLabel(2, -1): 1, OLabel(2, 1): -1, OLabel(3, -1): 1, OLabel(1, 1): -1}


@pytest.mark.parametrize("L", range(1, 11))
def test_windows_are_complexes_of_the_right_size(L):
    C = window(L)
    assert verify_complex(C)
    assert len(C) == window_size(L) == len(oracle.o_window_cells(L))
    assert all(x.level < L for x in window_labels(L))


@pytest.mark.parametrize("L", range(1, 7))
def test_window_homology_matches_oracle(L):
    H = ChainHomology(window(L))
    for k, (free, tors) in oracle.o_window_homology(L).items():
        assert H.group(k).iso_type() == (free, tuple(tors))


def test_matching_is_acyclic_with_unit_pivots():
    C = window(9)
    pairs = [(C.index[a], C.index[b]) for a, b in canonical_matching(C.basis)]
    check_matching(list(C.differential.columns()), pairs, C.basis)
    for x in C.basis:
        r = o_partner(x)
        if r is None:
            assert x in CRITICAL
        else:
            y, upper = r
            assert o_partner(y) == (x, not upper)


@pytest.mark.parametrize("N", range(1, 6))
def test_balanced_windows_collapse_to_critical_cells(N):
    C = balanced_window(N)
    assert len(balanced_labels(N)) == 8 * N
    R = morse_reduce(C, canonical_matching(C.basis))
    assert set(R.reduced.basis) == set(CRITICAL)
    assert R.reduced.differential.is_zero()
    assert R.include({OLabel(0, 1): 1}) == vhat_generator(1)
    assert R.include({OLabel(0, 0): 1}) == vhat_generator(0)


def test_generators_are_cycles():
    C = window(5)
    for k in (0, 1):
        assert C.d(vhat_generator(k)) == {}


def test_limit_homology_is_z_in_degrees_zero_and_one():
    res = limit_homology(8)
    assert res.group(0).iso_type() == (1, ())
    assert res.group(1).iso_type() == (1, ())
    assert res.group(2).is_trivial()
    top = res.results[1].top
    G1 = top.group(1)
    (z,) = res.group(1).all_generators()
    a, b = G1.coordinates(z), G1.coordinates(vhat_generator(1))
    assert any(a) and (a == b or a == tuple(-x for x in b))


def test_short_towers_do_not_stabilize():
    with pytest.raises(NotStabilized):
        limit_homology(7)


def test_finite_windows_differ_from_the_limit():
    # H_0 of every window from level 2 on has rank 3: the extra classes die only in the limit
    assert ChainHomology(window(3)).group(0).iso_type() == (3, ())
    assert ChainHomology(window(5)).group(0).iso_type() == (3, ())


def test_inclusion_of_level_three_into_level_five():
    from echlab.complexes import induced_homology_map
    from echlab.linalg import invariant_factors

    HA, HB = ChainHomology(window(3)), ChainHomology(window(5))
    M = induced_homology_map(lambda z: dict(z), HA, HB, 0, 0)
    assert HA.group(0).iso_type() == HB.group(0).iso_type() == (3, ())
    # rank one onto a direct summand: every generator goes to plus or minus one class
    assert [d for d in invariant_factors(M) if d] == [1]
    cols = [M.column(j) for j in range(3)]
    assert all(len(c) == 1 for c in cols) and len({next(iter(c)) for c in cols}) == 1


def test_les_of_level_three_in_level_five():
    from echlab.complexes import long_exact_sequence, sub_quotient
    from echlab.linalg import invariant_factors

    ses = sub_quotient(window(5), lambda lab: lab.level < 3)
    row = long_exact_sequence(ses)
    assert not row.exactness_failures()
    assert row.groups[row.index("quotient", 1)].iso_type() == (5, ())
    # the connecting map H_1(V_5 / V_3) -> H_0(V_3) kills two of the three classes
    delta = row.maps[row.index("quotient", 1)]
    assert [d for d in invariant_factors(delta) if d] == [1, 1]
