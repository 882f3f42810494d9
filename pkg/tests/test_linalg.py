import numpy as np
import pytest

from fusionlim.linalg import (
    CochainComplex, ComplexError, SparseMatrix, cohomology_dims, kernel_basis, matmul, rank,
    solve,
)


def test_rank_examples():
    assert rank(SparseMatrix.identity(2, 3)) == 3
    assert rank(SparseMatrix.zero(2, 4, 5)) == 0
    assert rank(SparseMatrix.from_dense(2, [[1, 1], [1, 1]])) == 1
    assert rank(SparseMatrix.from_dense(3, [[1, 2], [2, 1]])) == 1
    assert rank(SparseMatrix.from_dense(5, [[1, 2], [2, 1]])) == 2


def test_kernel_example():
    ker = kernel_basis([[1, 1], [1, 1]], 2)
    assert len(ker) == 1
    assert np.array_equal(ker[0], [1, 1])


def test_duplicate_entries_add_up():
    m = SparseMatrix.from_entries(2, 1, 2, [(0, 0, 1), (0, 0, 1), (0, 1, 3)])
    assert np.array_equal(m.to_dense(), [[0, 1]])
    assert m.nnz == 1


def test_rows_view_and_constructor_agree():
    rows = [{0: 1, 2: 2}, {}, {1: 4}]
    m = SparseMatrix(5, 3, 3, rows)
    assert m.rows == rows
    assert m == SparseMatrix.from_dense(5, m.to_dense())


def test_out_of_range_entry():
    with pytest.raises(IndexError):
        SparseMatrix.from_entries(2, 2, 2, [(0, 2, 1)])


def test_transpose_and_matmul():
    a = SparseMatrix.from_dense(3, [[1, 2, 0], [0, 1, 1]])
    assert np.array_equal(a.transpose().to_dense(), a.to_dense().T)
    prod = matmul(a, a.transpose())
    assert np.array_equal(prod.to_dense(), (a.to_dense() @ a.to_dense().T) % 3)


def test_solve():
    x = solve([[1, 1], [0, 1]], [1, 1], 2)
    assert np.array_equal(x, [0, 1])
    assert solve([[1, 1], [1, 1]], [1, 0], 2) is None


def test_cohomology_examples():
    # 0 -> GF(2) -> 0
    K = CochainComplex(2, [1], [])
    assert cohomology_dims(K) == [1]
    # identity d0 on GF(2)^2
    K = CochainComplex(2, [2, 2], [SparseMatrix.identity(2, 2)])
    assert cohomology_dims(K) == [0, 0]


def test_cohomology_rejects_non_complex():
    d0 = SparseMatrix.from_dense(2, [[1], [0]])
    d1 = SparseMatrix.from_dense(2, [[1, 0]])
    K = CochainComplex(2, [1, 2, 1], [d0, d1])
    with pytest.raises(ComplexError):
        cohomology_dims(K)


def test_shape_mismatch_rejected():
    with pytest.raises(ComplexError):
        CochainComplex(2, [1, 2], [SparseMatrix.identity(2, 1)])
