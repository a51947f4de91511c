"""Kernel selection: compiled Cython sweeps when available, pure Python otherwise."""

import numpy as np

from . import _lift_py

try:
    from . import _lift as _impl
    COMPILED = True
except ImportError:  # extension not built; fall back
    _impl = _lift_py
    COMPILED = False

BACKEND = "compiled" if COMPILED else "python"

lift_sweep = _impl.lift_sweep
local_solve_values = _impl.local_solve_values


def csr_parts(mat):
    """CSR arrays (indptr, indices, data, diag) in the dtypes the kernels expect."""
    csr = mat.tocsr()
    indptr = np.asarray(csr.indptr, dtype=np.int64)
    indices = np.asarray(csr.indices, dtype=np.int64)
    data = np.asarray(csr.data, dtype=np.float64)
    diag = np.asarray(csr.diagonal(), dtype=np.float64)
    if np.any(diag == 0.0):
        raise ValueError("operator has zero diagonal entries; local solves undefined")
    return indptr, indices, data, diag
