import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from oracles import gauss_jordan_inverse, random_spd, sqrt_weighted_pinv, svd_pinv
from pinvdb import formats
from pinvdb.errors import (
    DimensionMismatch,
    NotPositiveDefinite,
    NotSquare,
    NotSymmetric,
    SingularDelta,
    SingularMatrix,
    WeightNotPD,
)
from pinvdb.matrix import Backend, DenseMatrix, column, identity
from pinvdb.pinv import (
    DEFAULT_TOLERANCES,
    Tolerances,
    WeightPair,
    bordered_pd_inverse,
    initial_state,
    inverse,
    mp_pinv,
    partition_states,
    partition_step,
    penrose_residuals,
    spd_determinant,
    weighted_pinv,
)
from pinvdb.registry import A_10_11


def dm(arr, backend=Backend.FLAT):
    return DenseMatrix(np.asarray(arr, dtype=float), backend)


def weights(rng, m, n):
    return WeightPair(dm(random_spd(rng, m)), dm(random_spd(rng, n)))


# -- bordering inverse -----------------------------------------------------

def test_bordering_simple_cases():
    assert bordered_pd_inverse(identity(5)) == identity(5)
    assert bordered_pd_inverse(dm(np.diag([2.0, 4.0]))).to_numpy().tolist() == [[0.5, 0], [0, 0.25]]


def test_bordering_matches_gauss_jordan_8x8():
    rng = np.random.default_rng(7)
    B = rng.uniform(-1, 1, (8, 8))
    S = B.T @ B + np.eye(8)
    got = bordered_pd_inverse(dm(S)).to_numpy()
    assert np.abs(got - gauss_jordan_inverse(S)).max() <= 1e-10


def test_bordering_errors():
    with pytest.raises(NotPositiveDefinite):
        bordered_pd_inverse(dm(np.diag([1.0, -1.0])))
    with pytest.raises(NotPositiveDefinite):
        bordered_pd_inverse(dm([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(NotSymmetric):
        bordered_pd_inverse(dm([[2.0, 1.0], [0.0, 2.0]]))
    with pytest.raises(NotSquare):
        bordered_pd_inverse(dm(np.ones((2, 3))))


def test_spd_determinant():
    rng = np.random.default_rng(8)
    S = random_spd(rng, 6)
    assert spd_determinant(dm(S)) == pytest.approx(np.linalg.det(S), rel=1e-10)


# -- weighted / ordinary pseudo-inverse ------------------------------------

def test_diagonal_with_zero():
    A = dm(np.diag([2.0, 0.0, 5.0]))
    X = mp_pinv(A)
    np.testing.assert_allclose(X.to_numpy(), np.diag([0.5, 0.0, 0.2]), atol=1e-15)
    exact = dm(np.diag([0.5, 0.0, 0.2]))
    assert penrose_residuals(A, exact, WeightPair.identity(3, 3)) == (0.0, 0.0, 0.0, 0.0)


def test_zero_matrix():
    X = mp_pinv(dm(np.zeros((3, 4))))
    assert X.shape == (4, 3)
    assert not X.to_numpy().any()


def test_row_vector():
    X = mp_pinv(dm([[3.0, 4.0]]))
    np.testing.assert_allclose(X.to_numpy(), [[0.12], [0.16]], rtol=1e-15)


def test_invertible_square():
    rng = np.random.default_rng(9)
    arr = rng.uniform(-10, 10, (6, 6))
    X = inverse(dm(arr)).to_numpy()
    assert np.abs(X @ arr - np.eye(6)).max() <= 1e-8
    np.testing.assert_array_equal(X, mp_pinv(dm(arr)).to_numpy())


def test_inverse_errors():
    with pytest.raises(NotSquare):
        inverse(dm(np.ones((2, 3))))
    assert issubclass(NotSquare, DimensionMismatch)
    with pytest.raises(SingularMatrix):
        inverse(dm([[1.0, 2.0], [2.0, 4.0]]))


def test_weighted_matches_sqrt_oracle():
    rng = np.random.default_rng(10)
    A = rng.uniform(-10, 10, (6, 4))
    W = weights(rng, 6, 4)
    X = weighted_pinv(dm(A), W).to_numpy()
    Y = sqrt_weighted_pinv(A, W.M.to_numpy(), W.N.to_numpy())
    assert np.abs(X - Y).max() <= 1e-8


def test_weight_validation():
    A = dm(np.ones((3, 2)))
    with pytest.raises(DimensionMismatch):
        weighted_pinv(A, (identity(2), identity(2)))
    with pytest.raises(WeightNotPD):
        weighted_pinv(A, (identity(3), dm(np.diag([1.0, -2.0]))))
    with pytest.raises(WeightNotPD):
        weighted_pinv(A, (dm([[1, 2, 0], [0, 1, 0], [0, 0, 1]]), identity(2)))


def test_identity_weights_same_as_mp():
    rng = np.random.default_rng(11)
    A = dm(rng.uniform(-10, 10, (7, 5)))
    W = WeightPair(identity(7), identity(5))  # validated, not the trusted shortcut
    assert weighted_pinv(A, W).identical(mp_pinv(A))


def test_double_pinv_recovers_matrix():
    rng = np.random.default_rng(12)
    arr = rng.uniform(-10, 10, (6, 4))
    back = mp_pinv(mp_pinv(dm(arr))).to_numpy()
    assert np.abs(back - arr).max() <= 1e-8


def test_perturbation_detected():
    rng = np.random.default_rng(13)
    A = dm(rng.uniform(-10, 10, (5, 4)))
    X = mp_pinv(A).to_numpy() + 0.1 * rng.standard_normal((4, 5))
    assert penrose_residuals(A, dm(X), WeightPair.identity(5, 4))[0] > 1e-3


def test_penrose_residual_shape_check():
    with pytest.raises(DimensionMismatch):
        penrose_residuals(identity(2), identity(3), WeightPair.identity(2, 2))


def test_builtin_test_matrix_display():
    assert np.linalg.matrix_rank(A_10_11) == 9
    X = mp_pinv(dm(A_10_11))
    cells = formats.display_round(X)
    assert cells[:3] == ["1", "-1", "0"]
    assert cells[-2:] == ["-0.25", "-0.417"]
    assert np.abs(X.to_numpy() - svd_pinv(A_10_11)).max() <= 1e-8


def test_backends_identical_for_weighted():
    rng = np.random.default_rng(14)
    A = rng.uniform(-10, 10, (9, 7))
    A[:, 3] = A[:, 1]
    M, N = random_spd(rng, 9), random_spd(rng, 7)
    outs = [
        weighted_pinv(dm(A, b), WeightPair(dm(M, b), dm(N, b))) for b in (Backend.FLAT, Backend.NESTED)
    ]
    assert outs[0].identical(outs[1])


def test_compat_mode_zero_test():
    # the second column differs from the first by 1e-4: dependent under the
    # display-precision test, independent under the default one
    A = dm([[1.0, 1.0], [1.0, 1.0001]])
    W = WeightPair.identity(2, 2)
    default = list(partition_states(A, W))
    compat = list(partition_states(A, W, Tolerances(compat_mode=True)))
    assert default[1].independent is True
    assert compat[1].independent is False


def test_tolerances_validated():
    with pytest.raises(ValueError):
        Tolerances(zero_test=0.0)
    with pytest.raises(ValueError):
        Tolerances(pd_pivot=-1.0)


# -- single steps ----------------------------------------------------------

def test_step_branches():
    A = dm([[1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
    states = list(partition_states(A, WeightPair.identity(3, 3)))
    assert [s.k for s in states] == [1, 2, 3]
    assert states[0].independent is True
    assert states[1].independent is True
    assert states[2].independent is False  # duplicate of column 1
    assert states[2].X.shape == (3, 3)


def test_zero_first_column():
    state = initial_state(dm([[0.0], [0.0]]), identity(2))
    assert state.independent is False
    assert state.X.shape == (1, 2) and not state.X.to_numpy().any()


def test_two_steps_reproduce_full_run():
    A = dm([[1.0, 2.0], [3.0, 4.0], [5.0, 7.0]])
    M, N = identity(3), identity(2)
    s1 = initial_state(column(A, 0), M)
    s2 = partition_step(s1, column(A, 1), N, M)
    assert s2.X.identical(mp_pinv(A, refine=0))


def test_delta_matches_compact_form():
    rng = np.random.default_rng(15)
    A = rng.uniform(-10, 10, (6, 4))
    A[:, 2] = 2 * A[:, 0] - A[:, 1]
    M, N = random_spd(rng, 6), random_spd(rng, 4)
    states = list(partition_states(dm(A), (dm(M), dm(N))))
    prev, cur = states[1], states[2]
    assert cur.independent is False
    X, Ap = prev.X.to_numpy(), prev.A_k.to_numpy()
    d, l = cur.d.to_numpy(), cur.l.to_numpy()
    Np = N[:2, :2]
    compact = (
        N[2, 2] + d.T @ Np @ d - (d.T @ l + l.T @ d)
        - l.T @ (np.eye(2) - X @ Ap) @ np.linalg.inv(Np) @ l
    ).item()
    assert cur.delta == pytest.approx(compact, rel=1e-10, abs=1e-12)


def test_prefixes_match_oracle():
    rng = np.random.default_rng(16)
    A = rng.uniform(-10, 10, (7, 5))
    M, N = random_spd(rng, 7), random_spd(rng, 5)
    for state in partition_states(dm(A), (dm(M), dm(N))):
        k = state.k
        want = sqrt_weighted_pinv(A[:, :k], M, N[:k, :k])
        assert np.abs(state.X.to_numpy() - want).max() <= 1e-8


def test_singular_delta():
    # a dependent column under N with n_kk = l' N^-1 l can only arise for a
    # non-PD N, so bypass validation with a trusted pair
    A = dm([[1.0, 1.0], [0.0, 0.0]])
    N = dm([[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(SingularDelta):
        weighted_pinv(A, WeightPair(identity(2), N, trusted=True))


# -- properties ------------------------------------------------------------

@st.composite
def pinv_instances(draw):
    m = draw(st.integers(1, 12))
    n = draw(st.integers(1, 10))
    s = draw(st.integers(0, 2**31))
    rng = np.random.default_rng(s)
    A = rng.uniform(-10, 10, (m, n))
    kind = draw(st.sampled_from(["full", "dup", "zero"]))
    if kind == "dup" and n > 1:
        A[:, rng.integers(1, n)] = A[:, 0]
    elif kind == "zero":
        A[:, rng.integers(0, n)] = 0.0
    A *= draw(st.sampled_from([1e-3, 1.0, 1e3]))
    return A, random_spd(rng, m), random_spd(rng, n)


@seed(31)
@settings(max_examples=80, deadline=None)
@given(pinv_instances())
def test_penrose_property(inst):
    A, M, N = inst
    X = weighted_pinv(dm(A), (dm(M), dm(N)))
    assert max(penrose_residuals(dm(A), X, (dm(M), dm(N)))) <= 1e-8


@seed(32)
@settings(max_examples=50, deadline=None)
@given(st.integers(1, 30), st.integers(0, 2**31), st.sampled_from([1.0, 1e3, 1e6]))
def test_bordering_property(n, s, cond):
    S = random_spd(np.random.default_rng(s), n, cond)
    got = bordered_pd_inverse(dm(S)).to_numpy()
    assert np.abs(got - gauss_jordan_inverse(S)).max() <= 1e-10


def test_default_tolerances():
    assert DEFAULT_TOLERANCES.zero_test == 1e-10
    assert DEFAULT_TOLERANCES.compat_mode is False


def test_polish_recovers_ill_conditioned_case():
    rng = np.random.default_rng(7)
    U, _ = np.linalg.qr(rng.standard_normal((11, 11)))
    V, _ = np.linalg.qr(rng.standard_normal((11, 11)))
    A = U @ np.diag(np.geomspace(1.0, 1e-5, 11)) @ V.T
    expected = np.linalg.inv(A)
    bare = mp_pinv(dm(A), refine=0).to_numpy()
    polished = mp_pinv(dm(A)).to_numpy()
    scale = np.abs(expected).max()
    assert np.abs(polished - expected).max() / scale <= np.abs(bare - expected).max() / scale
    assert np.abs(polished - expected).max() / scale < 1e-9


def test_polish_keeps_exact_result():
    A = dm([[2.0, 0.0], [0.0, 4.0]])
    assert mp_pinv(A) == dm([[0.5, 0.0], [0.0, 0.25]])
