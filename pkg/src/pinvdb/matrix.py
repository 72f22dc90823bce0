"""Dense and sparse (COO) matrices and the fundamental arithmetic operations.

A :class:`DenseMatrix` keeps its elements either in one flat row-major buffer
(``Backend.FLAT``) or in one buffer per row (``Backend.NESTED``). Both layouts
are driven through kernels that perform the same floating point operations in
the same order, so every operation gives bit-identical results on either
layout.
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NonFiniteValue,
    NonSquarePower,
)


class Backend(str, enum.Enum):
    FLAT = "flat"
    NESTED = "nested"


def _backend(value):
    try:
        return Backend(value)
    except ValueError:
        raise ValueError(f"unknown backend {value!r}; expected 'flat' or 'nested'") from None


class DenseMatrix:
    """An immutable m x n matrix of binary64 values.

    ``values`` is anything ``numpy.asarray`` turns into a 2-D array. NaN and
    infinite values are rejected.
    """

    __slots__ = ("_m", "_n", "_backend", "_data", "_canonical")

    def __init__(self, values, backend=Backend.FLAT):
        arr = np.array(values, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionMismatch(f"expected a 2-D array, got {arr.ndim}-D")
        m, n = arr.shape
        if m < 1 or n < 1:
            raise DimensionMismatch(f"matrix dimensions must be positive, got {m}x{n}")
        if not np.isfinite(arr).all():
            raise NonFiniteValue("matrix elements must be finite")
        backend = _backend(backend)
        self._init(m, n, backend, _store(arr, backend))

    def _init(self, m, n, backend, data):
        self._m = m
        self._n = n
        self._backend = backend
        self._data = data
        self._canonical = None

    @classmethod
    def _wrap(cls, m, n, backend, data):
        # Kernel outputs: trusted shape, no validation.
        obj = cls.__new__(cls)
        if backend is Backend.FLAT:
            data.flags.writeable = False
        obj._init(m, n, backend, data)
        return obj

    @classmethod
    def _from_2d(cls, arr, backend):
        return cls._wrap(arr.shape[0], arr.shape[1], backend, _store(arr, backend))

    @property
    def rows(self):
        return self._m

    @property
    def cols(self):
        return self._n

    @property
    def shape(self):
        return (self._m, self._n)

    @property
    def backend(self):
        return self._backend

    @property
    def dimension(self):
        """Wire form of the shape, e.g. ``"11x10"``."""
        return f"{self._m}x{self._n}"

    def to_numpy(self):
        """Return a fresh, writable 2-D copy of the elements."""
        return np.array(_as_2d(self))

    def flat_values(self):
        """Row-major 1-D view of the elements (a copy for nested storage)."""
        if self._backend is Backend.FLAT:
            return self._data
        return _as_2d(self).reshape(-1)

    def with_backend(self, backend):
        backend = _backend(backend)
        if backend is self._backend:
            return self
        return DenseMatrix._from_2d(np.array(_as_2d(self)), backend)

    def __getitem__(self, index):
        i, j = index
        if not (-self._m <= i < self._m and -self._n <= j < self._n):
            raise IndexOutOfRange(f"index {index} out of range for {self.dimension}")
        i %= self._m
        j %= self._n
        if self._backend is Backend.FLAT:
            return float(self._data[i * self._n + j])
        return float(self._data[i][j])

    def identical(self, other):
        """Same shape and bit-for-bit equal elements."""
        if not isinstance(other, DenseMatrix) or self.shape != other.shape:
            return False
        a = np.ascontiguousarray(self.flat_values())
        b = np.ascontiguousarray(other.flat_values())
        return bool(np.array_equal(a.view(np.uint64), b.view(np.uint64)))

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(
            np.array_equal(self.flat_values(), other.flat_values())
        )

    __hash__ = None

    def __repr__(self):
        return f"DenseMatrix({self.dimension}, backend={self._backend.value})"


def _store(arr, backend):
    if backend is Backend.FLAT:
        data = np.ascontiguousarray(arr, dtype=np.float64).reshape(-1).copy()
        data.flags.writeable = False
        return data
    return kernels.pack_rows(np.ascontiguousarray(arr, dtype=np.float64))


def _as_2d(A):
    if A._backend is Backend.FLAT:
        return A._data.reshape(A._m, A._n)
    return kernels.unpack_rows(A._data, A._n)


def _like(A, B):
    """B in A's backend."""
    return B if B._backend is A._backend else B.with_backend(A._backend)


def _check_finite(A):
    if not np.isfinite(A.flat_values()).all():
        raise NonFiniteValue(f"result of shape {A.dimension} overflowed to a non-finite value")
    return A


# -- construction helpers --------------------------------------------------

def identity(n, backend=Backend.FLAT):
    return DenseMatrix._from_2d(np.eye(n), _backend(backend))


def zeros(m, n, backend=Backend.FLAT):
    return DenseMatrix._from_2d(np.zeros((m, n)), _backend(backend))


# -- unchecked arithmetic used by the inverse engine -----------------------

def _mul(A, B):
    B = _like(A, B)
    m, k, n = A._m, A._n, B._n
    if A._backend is Backend.FLAT:
        data = kernels.matmul_flat(A._data, m, k, B._data, n)
    else:
        data = kernels.matmul_rows(A._data, B._data, n)
    return DenseMatrix._wrap(m, n, A._backend, data)


def _axpby(r, A, s, B):
    B = _like(A, B)
    if A._backend is Backend.FLAT:
        data = kernels.axpby_flat(float(r), A._data, float(s), B._data)
    else:
        data = kernels.axpby_rows(float(r), A._data, float(s), B._data)
    return DenseMatrix._wrap(A._m, A._n, A._backend, data)


def _sub(A, B):
    return _axpby(1.0, A, -1.0, B)


def _add(A, B):
    return _axpby(1.0, A, 1.0, B)


def _scale(c, A):
    if A._backend is Backend.FLAT:
        data = kernels.scale_flat(float(c), A._data)
    else:
        data = kernels.scale_rows(float(c), A._data)
    return DenseMatrix._wrap(A._m, A._n, A._backend, data)


# -- slicing and assembly (no arithmetic) ----------------------------------

def column(A, j):
    """Column ``j`` (0-based) as an m x 1 matrix."""
    return DenseMatrix._from_2d(_as_2d(A)[:, j:j + 1], A._backend)


def leading_columns(A, k):
    """The first ``k`` columns of A."""
    return DenseMatrix._from_2d(_as_2d(A)[:, :k], A._backend)


def leading_block(A, k):
    """The leading principal k x k submatrix."""
    return DenseMatrix._from_2d(_as_2d(A)[:k, :k], A._backend)


def column_head(A, j, length):
    """The first ``length`` entries of column ``j`` as a column vector."""
    return DenseMatrix._from_2d(_as_2d(A)[:length, j:j + 1], A._backend)


def append_row(X, b):
    """Stack the 1 x n row ``b`` under X."""
    b = _like(X, b)
    if X._n != b._n or b._m != 1:
        raise DimensionMismatch(f"cannot append {b.dimension} row to {X.dimension}")
    return DenseMatrix._from_2d(np.vstack([_as_2d(X), _as_2d(b)]), X._backend)


def append_column(A, a):
    a = _like(A, a)
    if A._m != a._m or a._n != 1:
        raise DimensionMismatch(f"cannot append {a.dimension} column to {A.dimension}")
    return DenseMatrix._from_2d(np.hstack([_as_2d(A), _as_2d(a)]), A._backend)


def bordered(E, f, g):
    """Assemble ``[[E, f], [f^T, g]]`` from a k x k block, a k x 1 column and a scalar."""
    k = E._m
    out = np.empty((k + 1, k + 1))
    out[:k, :k] = _as_2d(E)
    col = _as_2d(_like(E, f))[:, 0]
    out[:k, k] = col
    out[k, :k] = col
    out[k, k] = g
    return DenseMatrix._from_2d(out, E._backend)


def scalar(A):
    """The value of a 1 x 1 matrix."""
    if A.shape != (1, 1):
        raise DimensionMismatch(f"expected a 1x1 matrix, got {A.dimension}")
    return A[0, 0]


def max_abs(A):
    return float(np.max(np.abs(A.flat_values())))


def frobenius(A):
    return float(np.linalg.norm(A.flat_values()))


# -- public operations -----------------------------------------------------

def transpose(A):
    return DenseMatrix._from_2d(np.ascontiguousarray(_as_2d(A).T), A._backend)


def linear_combine(r, A, s, B):
    """Elementwise ``r*A + s*B``."""
    if A.shape != B.shape:
        raise DimensionMismatch(f"cannot combine {A.dimension} with {B.dimension}")
    return _check_finite(_axpby(r, A, s, B))


def add(A, B):
    return linear_combine(1, A, 1, B)


def subtract(A, B):
    return linear_combine(1, A, -1, B)


def scale(r, A):
    return _check_finite(_scale(r, A))


def multiply(A, B):
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.dimension} by {B.dimension}")
    return _check_finite(_mul(A, B))


def matrix_power(A, p):
    """A^p by repeated left-to-right multiplication; A^0 is the identity."""
    if p < 0:
        raise ValueError("power must be non-negative")
    if p == 1:
        return A
    if A.rows != A.cols:
        raise NonSquarePower(f"cannot raise non-square {A.dimension} matrix to power {p}")
    if p == 0:
        return identity(A.rows, A.backend)
    out = A
    for _ in range(p - 1):
        out = _check_finite(_mul(out, A))
    return out


def power_product(A, p, B, q):
    """``A^p * B^q``."""
    for power in (p, q):
        if int(power) != power or power < 0:
            raise ValueError(f"powers must be non-negative integers, got {power!r}")
    p, q = int(p), int(q)
    if p != 1 and A.rows != A.cols:
        raise NonSquarePower(f"A is {A.dimension}; only p=1 is allowed")
    if q != 1 and B.rows != B.cols:
        raise NonSquarePower(f"B is {B.dimension}; only q=1 is allowed")
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.dimension} by {B.dimension}")
    return multiply(matrix_power(A, p), matrix_power(B, q))


# -- sparse ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SparseCoo:
    """Coordinate-format sparse matrix with sorted, unique, nonzero entries."""

    rows: int
    cols: int
    row_idx: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        row_idx = np.asarray(self.row_idx, dtype=np.int64).reshape(-1)
        col_idx = np.asarray(self.col_idx, dtype=np.int64).reshape(-1)
        values = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if self.rows < 1 or self.cols < 1:
            raise DimensionMismatch(f"matrix dimensions must be positive, got {self.rows}x{self.cols}")
        if not (len(row_idx) == len(col_idx) == len(values)):
            raise IndexOutOfRange("COO vectors must have equal length")
        if len(values):
            if row_idx.min() < 0 or row_idx.max() >= self.rows:
                raise IndexOutOfRange("row index out of range")
            if col_idx.min() < 0 or col_idx.max() >= self.cols:
                raise IndexOutOfRange("column index out of range")
            if not np.isfinite(values).all():
                raise NonFiniteValue("COO values must be finite")
            if (values == 0).any():
                raise IndexOutOfRange("COO must not store zero values")
            flat = row_idx * self.cols + col_idx
            if (np.diff(flat) <= 0).any():
                raise IndexOutOfRange("COO entries must be sorted by (row, col) without duplicates")
        for name, arr in (("row_idx", row_idx), ("col_idx", col_idx), ("values", values)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def nnz(self):
        return len(self.values)

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def dimension(self):
        return f"{self.rows}x{self.cols}"

    def __eq__(self, other):
        if not isinstance(other, SparseCoo):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.row_idx, other.row_idx)
            and np.array_equal(self.col_idx, other.col_idx)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None


def dense_to_coo(A, zero_tol=0.0):
    """Drop entries with ``|value| <= zero_tol`` and list the rest row by row."""
    if zero_tol < 0:
        raise ValueError("zero_tol must be non-negative")
    arr = _as_2d(A)
    r, c = np.nonzero(np.abs(arr) > zero_tol)
    return SparseCoo(A.rows, A.cols, r, c, arr[r, c])


def coo_to_dense(S, backend=Backend.FLAT):
    arr = np.zeros((S.rows, S.cols))
    arr[S.row_idx, S.col_idx] = S.values
    return DenseMatrix._from_2d(arr, _backend(backend))
