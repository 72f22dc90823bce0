"""Reference implementations that share no code with the package.

Each one takes and returns plain numpy arrays.
"""

import numpy as np


def gauss_jordan_inverse(S):
    """Inverse by Gauss-Jordan elimination with partial pivoting."""
    S = np.array(S, dtype=np.float64)
    n = S.shape[0]
    aug = np.hstack([S, np.eye(n)])
    for col in range(n):
        pivot = col + int(np.argmax(np.abs(aug[col:, col])))
        if aug[pivot, col] == 0.0:
            raise ZeroDivisionError("singular")
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        aug[col] /= aug[col, col]
        for row in range(n):
            if row != col:
                aug[row] -= aug[row, col] * aug[col]
    return aug[:, n:]


def svd_pinv(A, rcond=1e-12):
    """Pseudo-inverse from an explicit SVD, dropping singular values below rcond * s_max."""
    A = np.asarray(A, dtype=np.float64)
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    keep = s > rcond * (s[0] if s.size else 0.0)
    inv_s = np.zeros_like(s)
    inv_s[keep] = 1.0 / s[keep]
    return (Vt.T * inv_s) @ U.T


def sym_sqrt(S, power=0.5):
    w, V = np.linalg.eigh(np.asarray(S, dtype=np.float64))
    return (V * w ** power) @ V.T


def sqrt_weighted_pinv(A, M, N):
    """N^(-1/2) (M^(1/2) A N^(-1/2))^+ M^(1/2)."""
    Mh = sym_sqrt(M)
    Nih = sym_sqrt(N, -0.5)
    return Nih @ svd_pinv(Mh @ np.asarray(A) @ Nih) @ Mh


def penrose(A, X, M, N):
    """Max-abs violation of each of the four weighted Penrose equations."""
    A, X, M, N = (np.asarray(t, dtype=np.float64) for t in (A, X, M, N))
    MAX = M @ A @ X
    NXA = N @ X @ A
    return (
        np.abs(A @ X @ A - A).max(),
        np.abs(X @ A @ X - X).max(),
        np.abs(MAX - MAX.T).max(),
        np.abs(NXA - NXA.T).max(),
    )


def random_spd(rng, n, cond=None):
    """Random SPD matrix; with ``cond`` its eigenvalues span [1, cond]."""
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    if cond is None:
        w = rng.uniform(0.5, 2.0, n)
    else:
        w = np.geomspace(1.0, cond, n)
    S = (Q * w) @ Q.T
    return (S + S.T) / 2
