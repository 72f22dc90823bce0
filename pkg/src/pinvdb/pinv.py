"""Weighted Moore-Penrose inverse by column partitioning.

``weighted_pinv`` grows ``X_k``, the weighted pseudo-inverse of the first k
columns of A, one column at a time. For the new column ``a_k``:

* ``d_k = X_{k-1} a_k`` and ``c_k = a_k - A_{k-1} d_k``;
* if ``c_k != 0`` the new row is ``b_k = (c_k' M c_k)^-1 c_k' M``;
* otherwise ``b_k = delta_k^-1 (d_k' N_{k-1} - l_k') X_{k-1}`` where ``l_k``
  and ``n_kk`` border the leading block ``N_{k-1}`` of N and

      delta_k = n_kk + d_k' N_{k-1} d_k - (d_k' l_k + l_k' d_k)
                - l_k' N_{k-1}^-1 l_k + l_k' X_{k-1} A_{k-1} N_{k-1}^-1 l_k;

* ``X_k = [X_{k-1} - (d_k + (I - X_{k-1} A_{k-1}) N_{k-1}^-1 l_k) b_k ; b_k]``.

``N_{k-1}^-1`` comes from :func:`bordered_pd_inverse`, which inverts a
symmetric positive definite matrix by bordering its leading blocks.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatch,
    NotPositiveDefinite,
    NotSquare,
    NotSymmetric,
    SingularDelta,
    SingularMatrix,
    WeightNotPD,
)
from .matrix import (
    DenseMatrix,
    _add,
    _as_2d,
    _mul,
    _scale,
    _sub,
    append_column,
    append_row,
    bordered,
    column,
    column_head,
    identity,
    leading_block,
    scalar,
    transpose,
    zeros,
)

COMPAT_ZERO = 5e-4  # round(x, 3) != 0  <=>  |x| >= 5e-4


@dataclass(frozen=True)
class Tolerances:
    """Thresholds used by the inverse engine.

    ``zero_test`` decides when ``c_k`` (and ``a_1``) count as zero: the
    largest entry must not exceed ``zero_test * max(1, ||a_k||_inf)``.
    ``compat_mode`` swaps that for the fixed display-precision test
    ``|x| < 5e-4``. ``pd_pivot`` is the smallest bordering pivot accepted,
    relative to the largest diagonal entry.
    """

    zero_test: float = 1e-10
    pd_pivot: float = 1e-14
    compat_mode: bool = False

    def __post_init__(self):
        if not self.zero_test > 0:
            raise ValueError("zero_test must be positive")
        if not self.pd_pivot > 0:
            raise ValueError("pd_pivot must be positive")


DEFAULT_TOLERANCES = Tolerances()


def _is_zero(v, scale, tol):
    peak = float(np.max(np.abs(v.flat_values())))
    if tol.compat_mode:
        return peak < COMPAT_ZERO
    return peak <= tol.zero_test * max(1.0, scale)


def _check_symmetric(S, rel=1e-12):
    if S.rows != S.cols:
        raise NotSquare(f"expected a square matrix, got {S.dimension}")
    arr = _as_2d(S)
    peak = float(np.max(np.abs(arr)))
    if float(np.max(np.abs(arr - arr.T))) > rel * peak:
        raise NotSymmetric(f"{S.dimension} matrix is not symmetric")


# -- bordering inverse -----------------------------------------------------

def _bordering(S, tol):
    _check_symmetric(S)
    n = S.rows
    floor = tol.pd_pivot * max(abs(S[i, i]) for i in range(n))
    pivots = [S[0, 0]]
    if not pivots[0] > floor:
        raise NotPositiveDefinite(f"pivot 1 is {pivots[0]!r}")
    inv = DenseMatrix._from_2d(np.array([[1.0 / pivots[0]]]), S.backend)
    for i in range(1, n):
        l = column_head(S, i, i)
        lt = transpose(l)
        g = S[i, i] - scalar(_mul(_mul(lt, inv), l))
        if not g > floor:
            raise NotPositiveDefinite(f"pivot {i + 1} is {g!r}")
        pivots.append(g)
        f = _scale(-1.0 / g, _mul(inv, l))
        E = _add(inv, _scale(g, _mul(f, transpose(f))))
        inv = bordered(E, f, 1.0 / g)
    return inv, pivots


def bordered_pd_inverse(S, tol=DEFAULT_TOLERANCES, refine=1):
    """Inverse of a symmetric positive definite matrix by recursive bordering.

    The rank-one bordering updates lose accuracy as the condition number
    grows, so the result is polished by ``refine`` Newton steps
    ``X <- X + X (I - S X)``.

    Raises NotPositiveDefinite when a pivot falls to ``tol.pd_pivot`` times
    the largest diagonal entry or below.
    """
    X = _bordering(S, tol)[0]
    if refine:
        I = identity(S.rows, S.backend)
        for _ in range(refine):
            X = _add(X, _mul(X, _sub(I, _mul(S, X))))
    return X


def spd_determinant(S, tol=DEFAULT_TOLERANCES):
    """Determinant of an SPD matrix as the product of its bordering pivots."""
    return math.prod(_bordering(S, tol)[1])


# -- weights ---------------------------------------------------------------

@dataclass(frozen=True)
class WeightPair:
    """Positive definite weights: M (m x m) on the rows, N (n x n) on the columns."""

    M: DenseMatrix
    N: DenseMatrix
    trusted: bool = False

    @classmethod
    def identity(cls, m, n, backend="flat"):
        return cls(identity(m, backend), identity(n, backend), trusted=True)

    def validate(self, m, n, tol=DEFAULT_TOLERANCES):
        if self.M.shape != (m, m):
            raise DimensionMismatch(f"M must be {m}x{m}, got {self.M.dimension}")
        if self.N.shape != (n, n):
            raise DimensionMismatch(f"N must be {n}x{n}, got {self.N.dimension}")
        if self.trusted:
            return
        for name, W in (("M", self.M), ("N", self.N)):
            try:
                _bordering(W, tol)
            except (NotPositiveDefinite, NotSymmetric) as exc:
                raise WeightNotPD(f"weight {name}: {exc}") from exc


# -- partitioning ----------------------------------------------------------

@dataclass(frozen=True)
class PartitioningState:
    """X_k after k columns, plus the intermediates of the step that produced it.

    ``independent`` is True when the step took the ``c_k != 0`` branch, False
    for the ``c_k = 0`` branch, and None for the initial column.
    """

    k: int
    X: DenseMatrix
    A_k: DenseMatrix
    independent: Optional[bool] = None
    d: Optional[DenseMatrix] = None
    c: Optional[DenseMatrix] = None
    b: Optional[DenseMatrix] = None
    delta: Optional[float] = None
    l: Optional[DenseMatrix] = None
    n_kk: Optional[float] = None
    N_prev: Optional[DenseMatrix] = None


def initial_state(a_1, M, tol=DEFAULT_TOLERANCES):
    """X_1 for the first column: ``(a' M a)^-1 a' M``, or 0 when ``a_1 = 0``."""
    m = a_1.rows
    if _is_zero(a_1, float(np.max(np.abs(a_1.flat_values()))), tol):
        return PartitioningState(1, zeros(1, m, a_1.backend), a_1, independent=False)
    alb = _mul(transpose(a_1), M)
    ali = scalar(_mul(alb, a_1))
    return PartitioningState(1, _scale(1.0 / ali, alb), a_1, independent=True)


def partition_step(state, a_k, N, M, tol=DEFAULT_TOLERANCES):
    """Extend ``state`` (k-1 columns) with column ``a_k``; returns the k-column state."""
    k = state.k + 1
    X, A_prev = state.X, state.A_k
    if a_k.shape != (A_prev.rows, 1):
        raise DimensionMismatch(f"column must be {A_prev.rows}x1, got {a_k.dimension}")
    if N.rows < k:
        raise DimensionMismatch(f"N is {N.dimension}; step {k} needs at least {k}x{k}")

    d = _mul(X, a_k)
    c = _sub(a_k, _mul(A_prev, d))
    N_prev = leading_block(N, k - 1)
    N_prev_inv = bordered_pd_inverse(N_prev, tol)
    l = column_head(N, k - 1, k - 1)
    n_kk = N[k - 1, k - 1]
    nim1li = _mul(N_prev_inv, l)

    scale = float(np.max(np.abs(a_k.flat_values())))
    independent = not _is_zero(c, scale, tol)
    delta = None
    if independent:
        citm = _mul(transpose(c), M)
        b = _scale(1.0 / scalar(_mul(citm, c)), citm)
    else:
        dt = transpose(d)
        lt = transpose(l)
        dtn = _mul(dt, N_prev)
        dtnd = scalar(_mul(dtn, d))
        ditdi = scalar(_add(_mul(dt, l), _mul(lt, d)))
        litnli = scalar(_mul(lt, nim1li))
        lktar = _mul(lt, X)
        novo = scalar(_mul(lktar, _mul(A_prev, nim1li)))
        delta = n_kk + dtnd - ditdi - litnli + novo
        if not abs(delta) > tol.zero_test * max(1.0, abs(n_kk)):
            raise SingularDelta(f"delta at column {k} is {delta!r}")
        b = _scale(1.0 / delta, _sub(_mul(dtn, X), lktar))

    p = _sub(nim1li, _mul(_mul(X, A_prev), nim1li))
    X_next = _sub(_sub(X, _mul(d, b)), _mul(p, b))
    return PartitioningState(
        k,
        append_row(X_next, b),
        append_column(A_prev, a_k),
        independent=independent,
        d=d,
        c=c,
        b=b,
        delta=delta,
        l=l,
        n_kk=n_kk,
        N_prev=N_prev,
    )


def _as_weights(W):
    if isinstance(W, WeightPair):
        return W
    M, N = W
    return WeightPair(M, N)


def partition_states(A, W, tol=DEFAULT_TOLERANCES):
    """Yield the state after each column of A (k = 1..n)."""
    W = _as_weights(W)
    W.validate(A.rows, A.cols, tol)
    state = initial_state(column(A, 0), W.M, tol)
    yield state
    for j in range(1, A.cols):
        state = partition_step(state, column(A, j), W.N, W.M, tol)
        yield state


def polish(A, X, steps=1):
    """Newton-Schulz steps ``X <- 2X - X A X`` on an approximate generalized inverse.

    The column recursion loses accuracy on ill-conditioned or badly scaled
    inputs; one step restores the ``XAX = X`` and symmetry conditions to
    near working precision without moving an exact result.
    """
    for _ in range(steps):
        X = _sub(_add(X, X), _mul(_mul(X, A), X))
    return X


def weighted_pinv(A, W, tol=DEFAULT_TOLERANCES, refine=1):
    """The weighted Moore-Penrose inverse of A (n x m) for weights ``W = (M, N)``.

    ``refine`` Newton-Schulz steps polish the recursion's result; pass 0 for
    the bare recursion.
    """
    state = None
    for state in partition_states(A, W, tol):
        pass
    return polish(A, state.X, refine)


def mp_pinv(A, tol=DEFAULT_TOLERANCES, refine=1):
    """The Moore-Penrose inverse: identity weights."""
    return weighted_pinv(A, WeightPair.identity(A.rows, A.cols, A.backend), tol, refine)


def inverse(A, tol=DEFAULT_TOLERANCES, refine=1):
    """Regular inverse of a square matrix; SingularMatrix if any column is dependent."""
    if A.rows != A.cols:
        raise NotSquare(f"regular inverse needs a square matrix, got {A.dimension}")
    state = None
    for state in partition_states(A, WeightPair.identity(A.rows, A.cols, A.backend), tol):
        if not state.independent:
            raise SingularMatrix(f"column {state.k} is linearly dependent on the previous ones")
    return polish(A, state.X, refine)


# -- verification ----------------------------------------------------------

def penrose_residuals(A, X, W):
    """Normalized residuals of the four defining equations.

    Returns ``(|AXA - A|, |XAX - X|, |MAX - (MAX)'|, |NXA - (NXA)'|)`` in the
    Frobenius norm, each divided by ``1 + |A|_F``.
    """
    W = _as_weights(W)
    a, x = A.to_numpy(), X.to_numpy()
    M, N = W.M.to_numpy(), W.N.to_numpy()
    m, n = a.shape
    if x.shape != (n, m) or M.shape != (m, m) or N.shape != (n, n):
        raise DimensionMismatch(
            f"shapes A {a.shape}, X {x.shape}, M {M.shape}, N {N.shape} do not conform"
        )
    ax = a @ x
    xa = x @ a
    max_ = M @ ax
    nxa = N @ xa
    norm = 1.0 + np.linalg.norm(a)
    return (
        float(np.linalg.norm(ax @ a - a) / norm),
        float(np.linalg.norm(xa @ x - x) / norm),
        float(np.linalg.norm(max_ - max_.T) / norm),
        float(np.linalg.norm(nxa - nxa.T) / norm),
    )
