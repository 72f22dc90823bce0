"""Compute-or-lookup orchestration.

:func:`execute` canonicalizes and stores every operand, then looks the
operation up by ``(operation, operand ids, r, s, p, q)``. A hit returns the
stored result without computing anything; a miss computes, stores and returns.
"""

import time
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from . import formats
from .errors import (
    ArityMismatch,
    DimensionMismatch,
    DuplicateResult,
    EmptyUpload,
    NonSquarePower,
    NotSquare,
    UnknownOperation,
    UnknownTestMatrix,
)
from .matrix import (
    Backend,
    DenseMatrix,
    SparseCoo,
    add,
    coo_to_dense,
    linear_combine,
    multiply,
    power_product,
    scale,
    subtract,
)
from .pinv import DEFAULT_TOLERANCES, WeightPair, inverse, mp_pinv, weighted_pinv
from .registry import TestRegistry
from .store import OPERATIONS, ResultKey, coefficient_text

ARITY = {
    "A(-1)": 1, "A(+)": 1, "r*A": 1,
    "A+B": 2, "A-B": 2, "A*B": 2, "r*A+s*B": 2, "A^p*B^q": 2,
    "A(MN)": 3,
}
# Coefficients that take part in each operation; the rest are keyed as 0.
COEFFICIENTS = {"r*A": ("r",), "r*A+s*B": ("r", "s"), "A^p*B^q": ("p", "q")}


@dataclass(frozen=True)
class TestRef:
    """Operand naming a test matrix."""

    __test__ = False

    name: str


Operand = Union[DenseMatrix, SparseCoo, int, TestRef]


@dataclass(frozen=True)
class OperationRequest:
    operation: str
    operands: Tuple[Operand, ...]
    r: Union[int, float] = 0
    s: Union[int, float] = 0
    p: int = 0
    q: int = 0

    def __post_init__(self):
        if self.operation not in OPERATIONS:
            raise UnknownOperation(f"unknown operation {self.operation!r}")
        operands = tuple(self.operands)
        if len(operands) != ARITY[self.operation]:
            raise ArityMismatch(
                f"{self.operation} takes {ARITY[self.operation]} operand(s), got {len(operands)}"
            )
        for op in operands:
            if isinstance(op, bool) or not isinstance(op, (DenseMatrix, SparseCoo, int, TestRef)):
                raise TypeError(f"unsupported operand {op!r}")
        object.__setattr__(self, "operands", operands)
        for name in ("p", "q"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
        for name in ("r", "s"):
            coefficient_text(getattr(self, name))

    @property
    def used_coefficients(self):
        return COEFFICIENTS.get(self.operation, ())

    def key_coefficients(self):
        used = self.used_coefficients
        return {name: (getattr(self, name) if name in used else 0) for name in "rspq"}

    @property
    def extension(self):
        """True when r or s is non-integer (wider than the integer coefficient schema)."""
        return any(
            not float(v).is_integer()
            for name, v in self.key_coefficients().items() if name in "rs"
        )


@dataclass(frozen=True)
class ComputeResponse:
    result_id: int
    elements: DenseMatrix
    cache_hit: bool
    elapsed: float
    operand_ids: Tuple[int, int, int]
    extension: bool = False
    key: Optional[ResultKey] = field(default=None, compare=False)

    def to_json(self, places=3):
        return {
            "result_id": self.result_id,
            "cache_hit": self.cache_hit,
            "elapsed_ms": self.elapsed * 1e3,
            "dimension": self.elements.dimension,
            "elements": formats.to_r_string(self.elements),
            "display": formats.render_result(self.elements, places),
            "operand_ids": list(self.operand_ids),
            "extension": self.extension,
        }


# -- compute ---------------------------------------------------------------

def check_shapes(operation, shapes, p=0, q=0):
    """Raise before anything is stored if the operand shapes cannot work."""
    if operation == "A(-1)":
        (m, n), = shapes
        if m != n:
            raise NotSquare(f"A(-1) needs a square matrix, got {m}x{n}")
    elif operation == "A(MN)":
        (m, n), M, N = shapes
        if M != (m, m) or N != (n, n):
            raise DimensionMismatch(
                f"A is {m}x{n}: M must be {m}x{m} and N {n}x{n}, got "
                f"{M[0]}x{M[1]} and {N[0]}x{N[1]}"
            )
    elif operation in ("A+B", "A-B", "r*A+s*B"):
        if shapes[0] != shapes[1]:
            raise DimensionMismatch(f"{operation} needs equal shapes, got {shapes[0]} and {shapes[1]}")
    elif operation == "A*B":
        if shapes[0][1] != shapes[1][0]:
            raise DimensionMismatch(f"cannot multiply {shapes[0]} by {shapes[1]}")
    elif operation == "A^p*B^q":
        (am, an), (bm, bn) = shapes
        if p != 1 and am != an:
            raise NonSquarePower(f"A is {am}x{an}; only p=1 is allowed")
        if q != 1 and bm != bn:
            raise NonSquarePower(f"B is {bm}x{bn}; only q=1 is allowed")
        if an != bm:
            raise DimensionMismatch(f"cannot multiply {am}x{an} by {bm}x{bn}")


def compute(operation, matrices, r=0, s=0, p=0, q=0, tol=DEFAULT_TOLERANCES):
    """Evaluate one operation on dense operands, without touching any store."""
    if operation == "A(-1)":
        return inverse(matrices[0], tol)
    if operation == "A(+)":
        return mp_pinv(matrices[0], tol)
    if operation == "A(MN)":
        A, M, N = matrices
        return weighted_pinv(A, WeightPair(M, N), tol)
    if operation == "r*A":
        return scale(r, matrices[0])
    if operation == "A+B":
        return add(*matrices)
    if operation == "A-B":
        return subtract(*matrices)
    if operation == "A*B":
        return multiply(*matrices)
    if operation == "r*A+s*B":
        return linear_combine(r, matrices[0], s, matrices[1])
    if operation == "A^p*B^q":
        return power_product(matrices[0], p, matrices[1], q)
    raise UnknownOperation(f"unknown operation {operation!r}")


# -- orchestration ---------------------------------------------------------

def _load(store, registry, operand):
    """(matrix, stored id or None, test name)."""
    if isinstance(operand, (DenseMatrix, SparseCoo)):
        return operand, None, ""
    if isinstance(operand, TestRef):
        matrix = registry.find(operand.name) if registry is not None else None
        if matrix is None:
            id_in = store.find_test(operand.name)
            if id_in is None:
                raise UnknownTestMatrix(f"no test matrix named {operand.name!r}")
            return store.get_matrix(id_in), id_in, operand.name
        return matrix, store.find_test(operand.name), operand.name
    id_in = store.canonical_id(operand)
    return store.get_matrix(id_in), id_in, ""


def _dense(matrix, backend):
    if isinstance(matrix, SparseCoo):
        return coo_to_dense(matrix, backend)
    return matrix.with_backend(backend)


def execute(store, req, registry=None, tol=DEFAULT_TOLERANCES, backend=Backend.FLAT):
    """Answer ``req`` from ``store`` if possible, computing and storing it otherwise."""
    start = time.perf_counter()
    if registry is None:
        registry = TestRegistry(store)
    loaded = [_load(store, registry, op) for op in req.operands]
    check_shapes(req.operation, [m.shape for m, _, _ in loaded], req.p, req.q)

    ids = []
    for matrix, id_in, test_name in loaded:
        if id_in is None:
            id_in, _ = store.find_or_insert(matrix, test_name)
        ids.append(id_in)
    operand_ids = tuple(ids + [0] * (3 - len(ids)))

    coeffs = req.key_coefficients()
    key = ResultKey(req.operation, *operand_ids, **coeffs)
    record = store.find_result_record(key)
    if record is not None:
        return ComputeResponse(
            record.id, record.matrix(), True, time.perf_counter() - start,
            operand_ids, req.extension, key,
        )

    matrices = [_dense(m, backend) for m, _, _ in loaded]
    X = compute(req.operation, matrices, tol=tol, **coeffs)
    try:
        result_id = store.insert_result(key, X)
    except DuplicateResult:
        # Lost a race with an identical request; answer with the stored payload.
        record = store.find_result_record(key)
        result_id, X = record.id, record.matrix()
    else:
        X = X.with_backend(Backend.FLAT)
    return ComputeResponse(
        result_id, X, False, time.perf_counter() - start, operand_ids, req.extension, key,
    )


def ingest_upload(store, file_bytes, declared_name="upload.txt"):
    """Parse an uploaded matrix text file and store it once; returns its id."""
    if not file_bytes:
        raise EmptyUpload(f"{declared_name} is empty.")
    matrix = formats.parse_matrix_text(file_bytes)
    id_in, _ = store.find_or_insert(matrix)
    return id_in


render_result = formats.render_result
