import random

import pytest

from echlab.errors import CyclicMatching, NonUnitPivot
from echlab.hf import window_complex
from echlab.ocomplex import canonical_matching, window
from echlab.reduction import check_matching, reduce_greedy, reduce_matching
from echlab.samples import random_hfdata


def _apply(cols, chain):
    out = {}
    for j, c in chain.items():
        for i, v in cols[j].items():
            out[i] = out.get(i, 0) + c * v
    return {k: v for k, v in out.items() if v}


def _add(*chains):
    out = {}
    for ch in chains:
        for k, v in ch.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def _neg(ch):
    return {k: -v for k, v in ch.items()}


def _check_identities(cols, red):
    n = len(cols)
    m = len(red.survivors)
    for j in range(n):
        e = {j: 1}
        # pi is a chain map: d' pi = pi d
        assert _apply(red.cols, red.project(e)) == red.project(_apply(cols, e))
        # id - iota pi = d h + h d
        lhs = _add(e, _neg(red.include(red.project(e))))
        rhs = _add(_apply(cols, red.homotopy(e)), red.homotopy(_apply(cols, e)))
        assert lhs == rhs, j
    for k in range(m):
        e = {k: 1}
        assert red.project(red.include(e)) == e
        assert _apply(cols, red.include(e)) == red.include(_apply(red.cols, e))


def test_identities_on_o_window():
    C = window(6)
    cols = list(C.differential.columns())
    _check_identities(cols, reduce_greedy(cols))
    pairs = [(C.index[a], C.index[b]) for a, b in canonical_matching(C.basis)]
    _check_identities(cols, reduce_matching(cols, pairs, C.basis))


def test_identities_on_random_hf_windows():
    rng = random.Random(11)
    for _ in range(25):
        hf = random_hfdata(rng, max_gens=5)
        C = window_complex(hf, -2, 2)
        cols = list(C.differential.columns())
        _check_identities(cols, reduce_greedy(cols))


def test_reduced_differential_squares_to_zero():
    rng = random.Random(3)
    for _ in range(20):
        C = window_complex(random_hfdata(rng), -2, 2)
        red = reduce_greedy(list(C.differential.columns()))
        for j in range(len(red.cols)):
            assert not _apply(red.cols, _apply(red.cols, {j: 1}))


def test_non_unit_pivot_rejected():
    cols = [{}, {0: 2}]
    with pytest.raises(NonUnitPivot):
        check_matching(cols, [(1, 0)])


def test_cyclic_matching_rejected():
    # a square: d a = x + y, d b = x + y; matching (a,x), (b,y) closes a cycle
    cols = [{}, {}, {0: 1, 1: 1}, {0: 1, 1: 1}]
    with pytest.raises(CyclicMatching):
        check_matching(cols, [(2, 0), (3, 1)])


def test_greedy_leaves_no_unit_entries():
    C = window(7)
    red = reduce_greedy(list(C.differential.columns()))
    assert all(v not in (1, -1) for col in red.cols for v in col.values())
