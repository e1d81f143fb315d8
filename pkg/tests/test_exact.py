"""Tests for the exact rational linear-algebra substrate."""

import random
from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from superverma.exact import (
    ONE,
    SparseMatrix,
    express_in_span,
    poly_mul,
    rank_kernel,
    reduce_vector,
    rref,
    vec_add,
    vec_iadd,
    vec_scale,
)

F = Fraction


def test_vec_iadd_cancels():
    u = {0: F(1), 1: F(2)}
    vec_iadd(u, {0: F(-1), 2: F(3)})
    assert u == {1: F(2), 2: F(3)}


def test_vec_add_scale():
    u = vec_add({0: F(1)}, {0: F(1), 1: F(1)}, F(2))
    assert u == {0: F(3), 1: F(2)}
    assert vec_scale(u, F(0)) == {}


def test_poly_mul_commuting_evens():
    x1 = {(1, 0): ONE}
    x2 = {(0, 1): ONE}
    assert poly_mul(x1, x2) == {(1, 1): ONE}


def test_poly_mul_collects():
    p = {(1, 0): F(1), (0, 1): F(1)}
    q = {(1, 0): F(1), (0, 1): F(-1)}
    assert poly_mul(p, q) == {(2, 0): F(1), (0, 2): F(-1)}


def test_identity_matrix_rank_kernel():
    m = SparseMatrix.from_dense([[1, 0], [0, 1]])
    rank, kernel = rank_kernel(m)
    assert rank == 2 and kernel == []


def test_one_by_two_kernel():
    m = SparseMatrix.from_dense([[1, 1]])
    rank, kernel = rank_kernel(m)
    assert rank == 1
    assert kernel == [{0: F(1), 1: F(-1)}]


def test_rank_matches_transpose():
    m = SparseMatrix.from_dense([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank_kernel(m)[0] == rank_kernel(m.transpose())[0]


def test_kernel_vectors_annihilated():
    m = SparseMatrix.from_dense([[1, 2, 3], [4, 5, 6]])
    rank, kernel = rank_kernel(m)
    assert rank == 2 and len(kernel) == 1
    assert all(m.apply(k) == {} for k in kernel)


def test_rref_deterministic_under_row_shuffle():
    rows = [
        {0: F(1), 2: F(2)},
        {1: F(3), 2: F(1)},
        {0: F(2), 1: F(3), 2: F(5)},
    ]
    base = rref([dict(r) for r in rows])
    rng = random.Random(7)
    for _ in range(10):
        shuffled = [dict(r) for r in rows]
        rng.shuffle(shuffled)
        assert rref(shuffled) == base


def test_reduce_vector_membership():
    rows = [{0: F(1), 1: F(1)}, {1: F(1), 2: F(1)}]
    pivots, reduced = rref(rows)
    assert reduce_vector(pivots, reduced, {0: F(1), 2: F(-1)}) == {}
    assert reduce_vector(pivots, reduced, {0: F(1)}) != {}


def test_compose_and_apply_agree():
    a = SparseMatrix.from_dense([[1, 2], [3, 4]])
    b = SparseMatrix.from_dense([[0, 1], [1, 0]])
    ab = a.compose(b)
    v = {0: F(5), 1: F(7)}
    assert ab.apply(v) == a.apply(b.apply(v))


def test_express_in_span():
    v1 = {"a": F(1), "b": F(2)}
    v2 = {"b": F(1)}
    assert express_in_span([v1, v2], {"a": F(3), "b": F(4)}) == [F(3), F(-2)]
    assert express_in_span([v1, v2], {"c": F(1)}) is None
    assert express_in_span([v1, v2], {}) == [F(0), F(0)]


small_entries = st.integers(min_value=-4, max_value=4)


@st.composite
def matrices(draw):
    nrows = draw(st.integers(min_value=1, max_value=5))
    ncols = draw(st.integers(min_value=1, max_value=5))
    dense = [[draw(small_entries) for _ in range(ncols)] for _ in range(nrows)]
    return SparseMatrix.from_dense(dense)


@given(matrices())
def test_rank_plus_nullity(m):
    rank, kernel = rank_kernel(m)
    assert rank + len(kernel) == m.ncols
    for k in kernel:
        assert m.apply(k) == {}


@given(matrices())
def test_rank_equals_transpose_rank(m):
    assert rank_kernel(m)[0] == rank_kernel(m.transpose())[0]


@given(matrices(), st.randoms(use_true_random=False))
def test_rank_kernel_row_permutation_invariant(m, rng):
    rows = [dict(r) for r in m.rows]
    rng.shuffle(rows)
    shuffled = SparseMatrix(m.nrows, m.ncols, rows)
    assert rank_kernel(shuffled)[0] == rank_kernel(m)[0]
