"""Weighted Moore-Penrose inverses with a content-addressed result store."""

from .errors import PinvError
from .matrix import Backend, DenseMatrix, SparseCoo, coo_to_dense, dense_to_coo
from .pinv import (
    DEFAULT_TOLERANCES,
    Tolerances,
    WeightPair,
    bordered_pd_inverse,
    inverse,
    mp_pinv,
    penrose_residuals,
    weighted_pinv,
)
from .pipeline import OperationRequest, TestRef, execute
from .store import MatrixStore

__all__ = [
    "Backend", "DenseMatrix", "SparseCoo", "coo_to_dense", "dense_to_coo",
    "DEFAULT_TOLERANCES", "Tolerances", "WeightPair", "bordered_pd_inverse",
    "inverse", "mp_pinv", "penrose_residuals", "weighted_pinv",
    "OperationRequest", "TestRef", "execute", "MatrixStore", "PinvError",
]
__version__ = "0.1.0"
