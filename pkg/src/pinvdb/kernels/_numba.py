"""Compiled kernels.

Loop order is i-p-j with a zero-initialised accumulator so that every output
element is summed over ``p`` in ascending order. The numpy fallback performs
the same sequence of roundings, which keeps the two paths (and the flat and
nested layouts) bit-identical. Never add ``fastmath``: it permits
reassociation and FMA contraction.
"""

import numpy as np
from numba import njit
from numba.typed import List

NAME = "numba"


@njit(cache=True)
def matmul_flat(a, m, k, b, n):
    out = np.zeros(m * n)
    for i in range(m):
        for p in range(k):
            s = a[i * k + p]
            for j in range(n):
                out[i * n + j] += s * b[p * n + j]
    return out


@njit(cache=True)
def matmul_rows(a, b, n):
    out = List()
    k = len(b)
    for i in range(len(a)):
        row = np.zeros(n)
        ai = a[i]
        for p in range(k):
            s = ai[p]
            bp = b[p]
            for j in range(n):
                row[j] += s * bp[j]
        out.append(row)
    return out


@njit(cache=True)
def axpby_flat(r, a, s, b):
    out = np.empty(a.shape[0])
    for i in range(a.shape[0]):
        out[i] = r * a[i] + s * b[i]
    return out


@njit(cache=True)
def axpby_rows(r, a, s, b):
    out = List()
    for i in range(len(a)):
        ai = a[i]
        bi = b[i]
        row = np.empty(ai.shape[0])
        for j in range(ai.shape[0]):
            row[j] = r * ai[j] + s * bi[j]
        out.append(row)
    return out


@njit(cache=True)
def scale_flat(c, a):
    out = np.empty(a.shape[0])
    for i in range(a.shape[0]):
        out[i] = c * a[i]
    return out


@njit(cache=True)
def scale_rows(c, a):
    out = List()
    for i in range(len(a)):
        ai = a[i]
        row = np.empty(ai.shape[0])
        for j in range(ai.shape[0]):
            row[j] = c * ai[j]
        out.append(row)
    return out


@njit(cache=True)
def pack_rows(a):
    out = List()
    for i in range(a.shape[0]):
        out.append(a[i].copy())
    return out


@njit(cache=True)
def unpack_rows(rows, n):
    out = np.empty((len(rows), n))
    for i in range(len(rows)):
        out[i, :] = rows[i]
    return out
