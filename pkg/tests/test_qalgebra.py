from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from lietower.qalgebra import (Q, BoundarySquareError, ChainComplexSlice, SparseMatrix,
                               Span, chain_homology, format_scalar, kernel_basis, rref,
                               scalar, solve_columns, solve_linear)

small = st.integers(min_value=-3, max_value=3)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_scalar_coercion():
    assert scalar("3/4") == Q(3, 4)
    assert scalar(Fraction(-1, 2)) == Q(-1, 2)
    assert scalar(5) == 5
    assert format_scalar(Q(-7, 3)) == "-7/3"
    assert format_scalar(Q(4)) == "4"


def test_identity_solve():
    M = SparseMatrix.from_dense([[1, 0], [0, 1]])
    assert solve_linear(M, [3, Q(-1, 2)]) == [3, Q(-1, 2)]


def test_inconsistent_system():
    assert solve_linear(SparseMatrix.from_dense([[0]]), [1]) is None


def test_pivot_rule_picks_first_column():
    M = SparseMatrix.from_dense([[2, 4], [1, 2]])
    assert solve_linear(M, [2, 1]) == [1, 0]


def test_solve_columns_over_words():
    cols = [{("x",): 1, ("y",): 1}, {("y",): 2}]
    assert solve_columns(cols, {("x",): 1, ("y",): 5}) == [1, 2]
    assert solve_columns(cols, {("z",): 1}) is None


@given(matrices())
def test_rank_and_kernel_match_sympy(rows):
    M = SparseMatrix.from_dense(rows)
    ref = sympy.Matrix(rows)
    assert M.rank() == ref.rank()
    K = kernel_basis(M)
    assert len(K) == M.cols - ref.rank()
    for v in K:
        assert all(x == 0 for x in M.apply(v))


@given(matrices(), st.data())
def test_solutions_satisfy_system(rows, data):
    M = SparseMatrix.from_dense(rows)
    b = data.draw(st.lists(small, min_size=M.rows, max_size=M.rows))
    x = solve_linear(M, b)
    ref = sympy.Matrix(rows)
    consistent = ref.rank() == ref.row_join(sympy.Matrix(b)).rank()
    assert (x is not None) == consistent
    if x is not None:
        assert M.apply(x) == [Q(v) for v in b]


@given(matrices())
def test_rref_is_reduced(rows):
    piv = rref(SparseMatrix.from_dense(rows))
    for lead, row in piv.items():
        assert row[lead] == 1
        for other, r2 in piv.items():
            if other != lead:
                assert lead not in r2


def test_span_membership():
    S = Span()
    assert S.add({0: 1, 1: 1})
    assert not S.add({0: 2, 1: 2})
    assert S.contains({0: -1, 1: -1})
    assert len(S) == 1


def test_homology_zero_differential():
    H = chain_homology(ChainComplexSlice({0: 1, 1: 1}), [0, 1])
    assert (H[0].dimension, H[1].dimension) == (1, 1)


def test_homology_identity_boundary():
    C = ChainComplexSlice({0: 1, 1: 1}, {1: SparseMatrix.from_dense([[1]])})
    H = chain_homology(C, [0, 1])
    assert (H[0].dimension, H[1].dimension) == (0, 0)


def test_homology_circle_chains():
    C = ChainComplexSlice({0: 1, 1: 1}, {1: SparseMatrix.from_dense([[0]])})
    H = chain_homology(C, [0, 1])
    assert H[0].dimension == H[1].dimension == 1


def test_square_nonzero_is_reported():
    one = SparseMatrix.from_dense([[1]])
    C = ChainComplexSlice({0: 1, 1: 1, 2: 1}, {1: one, 2: one})
    with pytest.raises(BoundarySquareError):
        chain_homology(C, [0, 1, 2])
