"""Named test matrices.

Only one matrix ships built in: ``"A_10_11"``, an 11 x 10 member of a
classical parameterized test family, with parameter a = 1 (rank 9).
"""

import numpy as np

from .matrix import DenseMatrix

A_10_11 = np.array(
    [
        [11, 10, 9, 8, 7, 6, 5, 4, 3, 2],
        [10, 10, 9, 8, 7, 6, 5, 4, 3, 2],
        [9, 9, 9, 8, 7, 6, 5, 4, 3, 2],
        [8, 8, 8, 8, 7, 6, 5, 4, 3, 2],
        [7, 7, 7, 7, 7, 6, 5, 4, 3, 2],
        [6, 6, 6, 6, 6, 6, 5, 4, 3, 2],
        [5, 5, 5, 5, 5, 5, 5, 4, 3, 2],
        [4, 4, 4, 4, 4, 4, 4, 4, 3, 2],
        [3, 3, 3, 3, 3, 3, 3, 3, 2, 1],
        [2, 2, 2, 2, 2, 2, 2, 2, 1, 0],
        [1, 1, 1, 1, 1, 1, 1, 1, 0, -1],
    ],
    dtype=np.float64,
)

BUILTIN = {"A_10_11": A_10_11}


class TestRegistry:
    """Name -> matrix lookup, optionally falling back to a store's test index.

    Lookups are dictionary hits (or one indexed query), so their cost does not
    depend on how many matrices the store holds.
    """

    __test__ = False  # not a pytest class

    def __init__(self, store=None):
        self._matrices = {name: DenseMatrix(arr) for name, arr in BUILTIN.items()}
        self._store = store

    def add(self, name, matrix):
        if not name or "\t" in name or "\n" in name:
            raise ValueError(f"invalid test matrix name {name!r}")
        self._matrices[name] = matrix

    def names(self):
        return sorted(self._matrices)

    def find(self, name):
        found = self._matrices.get(name)
        if found is None and self._store is not None:
            id_in = self._store.find_test(name)
            if id_in is not None:
                found = self._store.get_matrix(id_in)
        return found

    def __contains__(self, name):
        return self.find(name) is not None


def find_test_matrix(registry, name):
    return registry.find(name)
