import random

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors as sympy_factors

from echlab.errors import CompositionNonzero
from echlab.linalg import (
    FinAbGroup,
    IntMatrix,
    field_homology_pair,
    hermite_rows,
    homology_pair,
    induced_map,
    integer_kernel,
    invariant_factors,
    is_isomorphism,
    lattice_contains,
    rank_mod_p,
    rank_q,
    smith_normal_form,
    solve_integer,
)

small_matrices = st.integers(1, 5).flatmap(
    lambda m: st.integers(1, 5).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def test_matrix_basics():
    A = IntMatrix.from_dense([[1, 0, 2], [0, -1, 0]])
    assert A.shape == (2, 3)
    assert A[0, 2] == 2 and A[1, 1] == -1 and A[1, 2] == 0
    assert A.transpose().to_dense() == [[1, 0], [0, -1], [2, 0]]
    assert (A @ A.transpose()).to_dense() == [[5, 0], [0, 1]]
    assert (A - A).is_zero()
    assert A.apply({0: 1, 2: 1}) == {0: 3}
    assert A.nnz == 3 and A.max_abs() == 2
    with pytest.raises(IndexError):
        A[2, 0]


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_snf_reassembles_and_matches_sympy(rows):
    A = IntMatrix.from_dense(rows)
    s = smith_normal_form(A)
    D = (s.left @ A @ s.right).to_dense()
    for i, row in enumerate(D):
        for j, v in enumerate(row):
            assert v == (s.d[i] if i == j and i < len(s.d) else 0)
    nz = [x for x in s.d if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert (s.left @ s.left_inv).to_dense() == IntMatrix.identity(len(rows)).to_dense()
    assert (s.right @ s.right_inv).to_dense() == IntMatrix.identity(len(rows[0])).to_dense()
    ref = [abs(int(x)) for x in sympy_factors(Matrix(rows), domain=ZZ) if x]
    assert nz == ref


def test_snf_known_example():
    assert invariant_factors(IntMatrix.from_dense([[2, 4], [6, 8]])) == [2, 4]
    assert invariant_factors(IntMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])) == [2, 6, 12]


def test_big_integers_survive():
    big = 10**40 + 7
    s = smith_normal_form(IntMatrix.from_dense([[big, 0], [0, 2 * big]]))
    assert s.d == [big, 2 * big]


def test_lattice_helpers():
    hnf = hermite_rows([[2, 0], [0, 3], [2, 3]], 2)
    assert lattice_contains(hnf, [4, 6]) and not lattice_contains(hnf, [1, 0])
    A = IntMatrix.from_dense([[1, 2, 3], [2, 4, 6]])
    for v in integer_kernel(A):
        assert not A.apply({i: x for i, x in enumerate(v) if x})
    assert len(integer_kernel(A)) == 2
    assert solve_integer(IntMatrix.from_dense([[2, 0], [0, 3]]), [4, 9]) == [2, 3]
    assert solve_integer(IntMatrix.from_dense([[2]]), [3]) is None


def test_field_ranks():
    A = IntMatrix.from_dense([[2, 0], [0, 3]])
    assert rank_q(A) == 2 and rank_mod_p(A, 2) == 1 and rank_mod_p(A, 3) == 1 and rank_mod_p(A, 5) == 2


def test_homology_pair_cyclic():
    # 0 -> Z --2--> Z -> 0 : H = Z/2 in the lower degree
    d_in = IntMatrix.from_dense([[2]])
    d_out = IntMatrix.zeros(0, 1)
    H = homology_pair(d_in, d_out, torsion_generators=True)
    assert H.iso_type() == (0, (2,))
    assert str(H) == "Z/2"
    assert H.coordinates({0: 3}) == (1,)
    assert field_homology_pair(d_in, d_out, 2) == 1 and field_homology_pair(d_in, d_out, 0) == 0


def test_homology_pair_rejects_nonzero_composition():
    with pytest.raises(CompositionNonzero):
        homology_pair(IntMatrix.from_dense([[1]]), IntMatrix.from_dense([[1]]))


def test_group_repr_and_equality():
    assert str(FinAbGroup(2, (2,))) == "Z^2 + Z/2"
    assert FinAbGroup(1) == FinAbGroup(1, (), [{0: 1}])
    with pytest.raises(ValueError):
        FinAbGroup(0, (2, 3))


def test_induced_map_and_isomorphism():
    # identity on Z^2 vs multiplication by 2
    zero = IntMatrix.zeros(2, 0)
    out = IntMatrix.zeros(0, 2)
    H = homology_pair(zero, out)
    M = induced_map(IntMatrix.identity(2), H, H)
    assert is_isomorphism(M, H, H)
    assert not is_isomorphism(induced_map(IntMatrix.identity(2).scale(2), H, H), H, H)
    # on Z/4, multiplication by 3 is invertible, by 2 is not
    T = homology_pair(IntMatrix.from_dense([[4]]), IntMatrix.zeros(0, 1), torsion_generators=True)
    assert is_isomorphism(IntMatrix.from_dense([[3]]), T, T)
    assert not is_isomorphism(IntMatrix.from_dense([[2]]), T, T)


def test_random_homology_matches_sympy_ranks():
    rng = random.Random(5)
    for _ in range(40):
        n0, n1, n2 = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)
        # d2: C2 -> C1 arbitrary, d1 = (something) killing image of d2
        d2 = IntMatrix.from_dense([[rng.randint(-3, 3) for _ in range(n2)] for _ in range(n1)])
        ker = integer_kernel(d2.transpose())  # rows y with y . d2 = 0
        rows = []
        for _ in range(n0):
            coeffs = [rng.randint(-2, 2) for _ in ker]
            rows.append([sum(c * k[j] for c, k in zip(coeffs, ker)) for j in range(n1)])
        d1 = IntMatrix.from_dense(rows, n1)
        H = homology_pair(d2, d1)
        r1 = Matrix(d1.to_dense()).rank() if n0 else 0
        tors = [abs(int(x)) for x in sympy_factors(Matrix(d2.to_dense()), domain=ZZ) if x]
        assert H.free_rank == n1 - r1 - len(tors)
        assert H.torsion == tuple(t for t in tors if t > 1)
