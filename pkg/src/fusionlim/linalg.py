"""Exact linear algebra over the prime field GF(p).

Matrices are stored sparsely as one ``{column: value}`` dict per row.  Rank
is computed by row echelon reduction with a fixed, deterministic column
order (sparsest columns first).  Over GF(2) rows are packed into Python
integers and reduced with XOR, which is the hot path for every cochain
complex built by the higher-limit engines.

Small dense problems (fixed points, kernels of action matrices) go through
:func:`rref` on numpy arrays instead.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class ComplexError(ValueError):
    """Raised when a cochain complex fails ``d o d = 0`` or shape checks."""


def _inverses(p: int) -> list[int]:
    return [0] + [pow(a, p - 2, p) for a in range(1, p)]


class SparseMatrix:
    """A sealed sparse matrix over GF(p) in compressed-row form.

    Row ``i`` has column indices ``indices[indptr[i]:indptr[i+1]]`` (sorted,
    no repeats) and values ``data[...]`` in ``1..p-1``.
    """

    __slots__ = ("p", "nrows", "ncols", "indptr", "indices", "data")

    def __init__(self, p: int, nrows: int, ncols: int, rows=None):
        if rows is None:
            rows = [dict() for _ in range(nrows)]
        if len(rows) != nrows:
            raise ValueError("row count mismatch")
        r, c, v = [], [], []
        for i, row in enumerate(rows):
            for col, val in row.items():
                r.append(i)
                c.append(col)
                v.append(val)
        self._seal(p, nrows, ncols, np.array(r, dtype=np.int64), np.array(c, dtype=np.int64),
                   np.array(v, dtype=np.int64))

    def _seal(self, p, nrows, ncols, r, c, v):
        self.p, self.nrows, self.ncols = p, nrows, ncols
        if c.size and (c.min() < 0 or c.max() >= ncols):
            raise IndexError("column index out of range")
        if r.size and (r.min() < 0 or r.max() >= nrows):
            raise IndexError("row index out of range")
        m = sp.csr_matrix((v % p, (r, c)), shape=(nrows, ncols), dtype=np.int64)
        m.sum_duplicates()
        m.data %= p
        m.eliminate_zeros()
        m.sort_indices()
        self.indptr = m.indptr.astype(np.int64)
        self.indices = m.indices.astype(np.int64)
        self.data = m.data.astype(np.int64)

    @classmethod
    def from_arrays(cls, p: int, nrows: int, ncols: int, r, c, v) -> "SparseMatrix":
        """Build from coordinate arrays; repeated coordinates add up."""
        m = cls.__new__(cls)
        m._seal(p, nrows, ncols, np.asarray(r, dtype=np.int64), np.asarray(c, dtype=np.int64),
                np.asarray(v, dtype=np.int64))
        return m

    @classmethod
    def from_entries(cls, p: int, nrows: int, ncols: int,
                     entries: Iterable[tuple[int, int, int]]) -> "SparseMatrix":
        """Build from (row, col, value) triples; repeated coordinates add up."""
        r, c, v = array("q"), array("q"), array("q")
        for a, b, x in entries:
            r.append(a)
            c.append(b)
            v.append(x)
        return cls.from_arrays(p, nrows, ncols, np.frombuffer(r, dtype=np.int64),
                               np.frombuffer(c, dtype=np.int64), np.frombuffer(v, dtype=np.int64))

    @classmethod
    def from_dense(cls, p: int, a) -> "SparseMatrix":
        a = np.asarray(a, dtype=np.int64) % p
        r, c = np.nonzero(a)
        return cls.from_arrays(p, a.shape[0], a.shape[1], r, c, a[r, c])

    @classmethod
    def identity(cls, p: int, n: int) -> "SparseMatrix":
        idx = np.arange(n)
        return cls.from_arrays(p, n, n, idx, idx, np.ones(n, dtype=np.int64))

    @classmethod
    def zero(cls, p: int, nrows: int, ncols: int) -> "SparseMatrix":
        e = np.zeros(0, dtype=np.int64)
        return cls.from_arrays(p, nrows, ncols, e, e, e)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return int(self.data.size)

    @property
    def rows(self) -> list[dict[int, int]]:
        """Row-wise dicts ``{column: value}`` (built on demand)."""
        ip, ix, d = self.indptr, self.indices.tolist(), self.data.tolist()
        return [dict(zip(ix[ip[i]:ip[i + 1]], d[ip[i]:ip[i + 1]])) for i in range(self.nrows)]

    def to_dense(self) -> np.ndarray:
        return self.to_scipy().toarray()

    def to_scipy(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.data, self.indices, self.indptr), shape=self.shape)

    def transpose(self) -> "SparseMatrix":
        coo = self.to_scipy().tocoo()
        return SparseMatrix.from_arrays(self.p, self.ncols, self.nrows, coo.col, coo.row, coo.data)

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "SparseMatrix":
        """Return the matrix with row i moved to row_perm[i], column c to col_perm[c]."""
        coo = self.to_scipy().tocoo()
        rp, cp = np.asarray(row_perm, dtype=np.int64), np.asarray(col_perm, dtype=np.int64)
        return SparseMatrix.from_arrays(self.p, self.nrows, self.ncols, rp[coo.row], cp[coo.col],
                                        coo.data)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.p, self.shape) == (other.p, other.shape) and \
            np.array_equal(self.indptr, other.indptr) and \
            np.array_equal(self.indices, other.indices) and np.array_equal(self.data, other.data)

    def __repr__(self):
        return f"SparseMatrix(p={self.p}, shape={self.shape}, nnz={self.nnz})"


def matmul(a: SparseMatrix, b: SparseMatrix) -> SparseMatrix:
    """Product ``a @ b`` mod p."""
    if a.p != b.p or a.ncols != b.nrows:
        raise ValueError("incompatible matrices")
    c = (a.to_scipy() @ b.to_scipy()).tocoo()
    return SparseMatrix.from_arrays(a.p, a.nrows, b.ncols, c.row, c.col, c.data % a.p)


def is_zero_product(a: SparseMatrix, b: SparseMatrix) -> bool:
    if a.ncols != b.nrows:
        raise ComplexError(f"shape mismatch {a.shape} o {b.shape}")
    if a.nnz == 0 or b.nnz == 0:
        return True
    # entries stay below p^2 * (inner dimension), far from int64 overflow
    c = a.to_scipy() @ b.to_scipy()
    return not np.any(c.data % a.p)


def _column_order(m: SparseMatrix) -> list[int]:
    """Position of each column when columns are sorted sparsest first."""
    counts = np.bincount(m.indices, minlength=m.ncols)
    order = np.lexsort((np.arange(m.ncols), counts))
    pos = np.empty(m.ncols, dtype=np.int64)
    pos[order] = np.arange(m.ncols)
    return pos


def _row_order(m: SparseMatrix) -> list[int]:
    # shortest rows first keeps fill-in low
    lengths = np.diff(m.indptr)
    return np.argsort(lengths, kind="stable").tolist()


def _rank_gf2(m: SparseMatrix) -> int:
    pos = _column_order(m)
    cols = pos[m.indices].tolist()
    ip = m.indptr.tolist()
    pivots: dict[int, int] = {}
    rank = 0
    for i in _row_order(m):
        x = 0
        for c in cols[ip[i]:ip[i + 1]]:
            x |= 1 << c
        while x:
            low = (x & -x).bit_length() - 1
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = x
                rank += 1
                break
            x ^= piv
    return rank


def _rank_gfp(m: SparseMatrix) -> int:
    p = m.p
    inv = _inverses(p)
    pos = _column_order(m)
    cols = pos[m.indices].tolist()
    vals = m.data.tolist()
    ip = m.indptr.tolist()
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for i in _row_order(m):
        x = dict(zip(cols[ip[i]:ip[i + 1]], vals[ip[i]:ip[i + 1]]))
        while x:
            low = min(x)
            piv = pivots.get(low)
            if piv is None:
                s = inv[x[low]]
                pivots[low] = {c: v * s % p for c, v in x.items()}
                rank += 1
                break
            f = x[low]
            for c, v in piv.items():
                nv = (x.get(c, 0) - f * v) % p
                if nv:
                    x[c] = nv
                else:
                    x.pop(c, None)
    return rank


def rank(a) -> int:
    """Rank of a :class:`SparseMatrix` over its field."""
    if not isinstance(a, SparseMatrix):
        raise TypeError("rank expects a SparseMatrix")
    if a.nrows == 0 or a.ncols == 0 or a.nnz == 0:
        return 0
    if a.nrows > a.ncols:
        # fewer, mostly independent rows: each stops at its first new pivot
        a = a.transpose()
    if a.p == 2:
        return _rank_gf2(a)
    return _rank_gfp(a)


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a dense matrix over GF(p).

    Returns ``(R, pivot_columns)``; ``R`` has the zero rows dropped.
    """
    a = np.array(a, dtype=np.int64) % p
    if a.ndim != 2:
        raise ValueError("expected a 2-d array")
    nr, nc = a.shape
    pivots: list[int] = []
    row = 0
    for col in range(nc):
        if row >= nr:
            break
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        k = row + int(nz[0])
        if k != row:
            a[[row, k]] = a[[k, row]]
        a[row] = a[row] * pow(int(a[row, col]), p - 2, p) % p
        others = np.nonzero(a[:, col])[0]
        for i in others:
            if i != row:
                a[i] = (a[i] - a[i, col] * a[row]) % p
        pivots.append(col)
        row += 1
    return a[:row], pivots


def _as_dense(a, p=None):
    if isinstance(a, SparseMatrix):
        return a.to_dense(), a.p
    if p is None:
        raise ValueError("prime required for dense input")
    return np.asarray(a, dtype=np.int64) % p, p


def kernel_basis(a, p: int | None = None) -> list[np.ndarray]:
    """Basis of the right kernel ``{x : a x = 0}``, one vector per basis element."""
    dense, p = _as_dense(a, p)
    ncols = dense.shape[1]
    r, pivots = rref(dense, p)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        x = np.zeros(ncols, dtype=np.int64)
        x[f] = 1
        for i, c in enumerate(pivots):
            x[c] = (-r[i, f]) % p
        basis.append(x)
    return basis


def solve(a, b, p: int | None = None):
    """One solution of ``a x = b`` over GF(p), or ``None`` if inconsistent."""
    dense, p = _as_dense(a, p)
    b = np.asarray(b, dtype=np.int64).reshape(-1) % p
    nr, nc = dense.shape
    aug = np.concatenate([dense, b.reshape(nr, 1)], axis=1)
    r, pivots = rref(aug, p)
    if pivots and pivots[-1] == nc:
        return None
    x = np.zeros(nc, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = r[i, nc]
    return x


@dataclass
class CochainComplex:
    """``C^0 -d0-> C^1 -d1-> ...``; ``differentials[i]`` has shape (dim C^{i+1}, dim C^i).

    The complex is taken to stop after the last listed space, so the top
    degree's cohomology is ``dim C^n - rank d^{n-1}``.  Builders that only
    trust degrees below the top should slice the result.
    """

    p: int
    dims: list[int]
    differentials: list[SparseMatrix] = field(default_factory=list)

    def __post_init__(self):
        if len(self.differentials) != max(len(self.dims) - 1, 0):
            raise ComplexError("need exactly one differential between consecutive degrees")
        for i, d in enumerate(self.differentials):
            if d.shape != (self.dims[i + 1], self.dims[i]):
                raise ComplexError(
                    f"d{i} has shape {d.shape}, expected {(self.dims[i + 1], self.dims[i])}")
            if d.p != self.p:
                raise ComplexError("prime mismatch")

    def check(self) -> None:
        for i in range(len(self.differentials) - 1):
            if not is_zero_product(self.differentials[i + 1], self.differentials[i]):
                raise ComplexError(f"d{i + 1} o d{i} != 0")

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * d for i, d in enumerate(self.dims))


def cohomology_dims(k: CochainComplex, check: bool = True) -> list[int]:
    """dim H^i = dim C^i - rank d^i - rank d^{i-1} for every degree of ``k``."""
    if check:
        k.check()
    ranks = [rank(d) for d in k.differentials] + [0]
    out = []
    for i, dim in enumerate(k.dims):
        prev = ranks[i - 1] if i > 0 else 0
        out.append(dim - ranks[i] - prev)
    return out
