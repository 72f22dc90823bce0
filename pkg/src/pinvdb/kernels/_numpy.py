"""Pure-numpy kernels, used when numba is disabled or unavailable.

Matrix products deliberately avoid ``@``/BLAS: the product is accumulated as
a sequence of rank-1 updates so each element sees the same additions, in the
same order, as the compiled kernels.
"""

import numpy as np

NAME = "numpy"


def _matmul_2d(a, b):
    out = np.zeros((a.shape[0], b.shape[1]))
    for p in range(a.shape[1]):
        out += a[:, p, None] * b[p]
    return out


def matmul_flat(a, m, k, b, n):
    return _matmul_2d(a.reshape(m, k), b.reshape(k, n)).reshape(m * n)


def matmul_rows(a, b, n):
    return pack_rows(_matmul_2d(np.vstack(a), np.vstack(b)))


def axpby_flat(r, a, s, b):
    return r * a + s * b


def axpby_rows(r, a, s, b):
    return tuple(r * x + s * y for x, y in zip(a, b))


def scale_flat(c, a):
    return c * a


def scale_rows(c, a):
    return tuple(c * x for x in a)


def pack_rows(a):
    return tuple(np.array(row, dtype=np.float64) for row in a)


def unpack_rows(rows, n):
    return np.vstack(rows).reshape(len(rows), n)
