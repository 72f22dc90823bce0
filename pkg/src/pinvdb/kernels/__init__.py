"""Kernel selection.

The compiled (numba) kernels are used unless ``PINVDB_DISABLE_NUMBA`` is set
to a truthy value or numba cannot be imported, in which case the pure-numpy
kernels take over. The choice is made once, at import time: row containers
built by one implementation (numba typed lists vs. tuples of arrays) are not
accepted by the other.
"""

import logging
import os

from . import _numpy as numpy_kernels

logger = logging.getLogger(__name__)

ENV_FLAG = "PINVDB_DISABLE_NUMBA"


def _flag_set():
    return os.environ.get(ENV_FLAG, "").strip().lower() not in ("", "0", "false", "no")


numba_kernels = None
if not _flag_set():
    try:
        from . import _numba as numba_kernels
    except ImportError:  # pragma: no cover - numba is a declared dependency
        logger.warning("numba unavailable; using numpy kernels")

active = numba_kernels if numba_kernels is not None else numpy_kernels

NAME = active.NAME
HAS_NUMBA = numba_kernels is not None

matmul_flat = active.matmul_flat
matmul_rows = active.matmul_rows
axpby_flat = active.axpby_flat
axpby_rows = active.axpby_rows
scale_flat = active.scale_flat
scale_rows = active.scale_rows
pack_rows = active.pack_rows
unpack_rows = active.unpack_rows

__all__ = [
    "ENV_FLAG", "HAS_NUMBA", "NAME", "active", "numba_kernels", "numpy_kernels",
    "matmul_flat", "matmul_rows", "axpby_flat", "axpby_rows",
    "scale_flat", "scale_rows", "pack_rows", "unpack_rows",
]
