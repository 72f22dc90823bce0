import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pinvdb.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NonFiniteValue,
    NonSquarePower,
)
from pinvdb.matrix import (
    Backend,
    DenseMatrix,
    SparseCoo,
    add,
    coo_to_dense,
    dense_to_coo,
    identity,
    linear_combine,
    matrix_power,
    multiply,
    power_product,
    scale,
    subtract,
    transpose,
)

BACKENDS = [Backend.FLAT, Backend.NESTED]

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def small_matrix(max_side=6):
    return st.tuples(st.integers(1, max_side), st.integers(1, max_side)).flatmap(
        lambda s: arrays(np.float64, s, elements=finite)
    )


@pytest.mark.parametrize("backend", BACKENDS)
def test_multiply_two_by_two(backend):
    A = DenseMatrix([[1, 2], [3, 4]], backend)
    B = DenseMatrix([[5, 6], [7, 8]], backend)
    assert multiply(A, B).to_numpy().tolist() == [[19, 22], [43, 50]]


@pytest.mark.parametrize("backend", BACKENDS)
def test_construction_and_shape(backend):
    A = DenseMatrix(np.arange(6.0).reshape(2, 3), backend)
    assert A.shape == (2, 3)
    assert A.dimension == "2x3"
    assert A.backend == backend
    assert A[1, 2] == 5.0
    with pytest.raises(IndexOutOfRange):
        A[2, 0]


def test_rejects_bad_input():
    with pytest.raises(NonFiniteValue):
        DenseMatrix([[1.0, np.nan]])
    with pytest.raises(NonFiniteValue):
        DenseMatrix([[np.inf]])
    with pytest.raises((DimensionMismatch, ValueError)):
        DenseMatrix(np.zeros((0, 3)))


def test_matrix_is_immutable():
    A = DenseMatrix([[1.0, 2.0]])
    with pytest.raises(ValueError):
        A.flat_values()[0] = 9.0


def test_shape_errors():
    A = DenseMatrix(np.ones((2, 3)))
    B = DenseMatrix(np.ones((2, 2)))
    with pytest.raises(DimensionMismatch):
        add(A, B)
    with pytest.raises(DimensionMismatch):
        subtract(A, B)
    with pytest.raises(DimensionMismatch):
        multiply(A, A)
    with pytest.raises(NonSquarePower):
        matrix_power(A, 2)


def test_power_product_rules():
    A = DenseMatrix([[1.0, 1.0], [0.0, 1.0]])
    assert matrix_power(A, 0).identical(identity(2))
    assert matrix_power(A, 3).to_numpy().tolist() == [[1, 3], [0, 1]]
    R = DenseMatrix(np.ones((2, 3)))
    # a rectangular operand is allowed only with exponent 1
    assert power_product(A, 2, R, 1).shape == (2, 3)
    with pytest.raises(NonSquarePower):
        power_product(A, 1, R, 2)


def test_subtract_self_is_zero_on_both_backends():
    arr = np.random.default_rng(3).uniform(-10, 10, (7, 5))
    for backend in BACKENDS:
        A = DenseMatrix(arr, backend)
        assert not subtract(A, A).to_numpy().any()


@seed(11)
@settings(max_examples=60, deadline=None)
@given(small_matrix(), st.integers(-5, 5), st.integers(-5, 5))
def test_backends_bit_identical(arr, r, s):
    m, n = arr.shape
    other = np.flip(arr).copy()
    sq = arr[: min(m, n), : min(m, n)]
    results = []
    for backend in BACKENDS:
        A, B = DenseMatrix(arr, backend), DenseMatrix(other, backend)
        S = DenseMatrix(sq, backend)
        results.append([
            add(A, B), subtract(A, B), scale(r, A), linear_combine(r, A, s, B),
            multiply(A, transpose(B)), transpose(A), matrix_power(S, 3),
        ])
    for x, y in zip(*results):
        assert x.identical(y)


@seed(12)
@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_ops_match_numpy(arr):
    A = DenseMatrix(arr)
    B = DenseMatrix(arr.T)
    np.testing.assert_allclose(multiply(A, B).to_numpy(), arr @ arr.T, rtol=1e-12, atol=1e-3)
    np.testing.assert_array_equal(add(A, A).to_numpy(), arr + arr)
    np.testing.assert_array_equal(transpose(transpose(A)).to_numpy(), arr)


@seed(13)
@settings(max_examples=60, deadline=None)
@given(small_matrix(8))
def test_coo_round_trip(arr):
    arr = np.where(np.abs(arr) < 1e5, 0.0, arr)  # make it sparse
    A = DenseMatrix(arr)
    S = dense_to_coo(A)
    assert S.nnz == np.count_nonzero(arr)
    for backend in BACKENDS:
        assert coo_to_dense(S, backend).identical(A.with_backend(backend))


def test_coo_validation():
    with pytest.raises(IndexOutOfRange):
        SparseCoo(2, 2, [0, 2], [0, 0], [1.0, 1.0])
    with pytest.raises(IndexOutOfRange):
        SparseCoo(2, 2, [0, 0], [1, 0], [1.0, 1.0])  # unsorted
    with pytest.raises(IndexOutOfRange):
        SparseCoo(2, 2, [0], [0], [0.0])
    with pytest.raises(IndexOutOfRange):
        SparseCoo(2, 2, [0, 1], [0], [1.0, 2.0])
    assert SparseCoo(3, 3, [], [], []).nnz == 0


def test_equality_is_numeric_identity_is_bitwise():
    a = DenseMatrix([[0.0]])
    b = DenseMatrix([[-0.0]])
    assert a == b
    assert not a.identical(b)
    assert a.identical(a.with_backend(Backend.NESTED))
