"""Pure-Python fallback for the compiled sweep kernels.

Same update order and arithmetic as the Cython version, so results agree
bit-for-bit; only the speed differs.
"""

import numpy as np


def lift_sweep(indptr, indices, data, diag, rhs, u, free_mask):
    """One in-place sweep of single-node local solves; returns max |update|."""
    max_change = 0.0
    for i in range(u.shape[0]):
        if not free_mask[i]:
            continue
        acc = rhs[i]
        for k in range(indptr[i], indptr[i + 1]):
            j = indices[k]
            if j != i:
                acc -= data[k] * u[j]
        unew = acc / diag[i]
        change = abs(unew - u[i])
        if change > max_change:
            max_change = change
        u[i] = unew
    return max_change


def local_solve_values(indptr, indices, data, diag, rhs, u, free_mask):
    """Local-solve value at every free node, without mutating u."""
    out = np.empty(u.shape[0], dtype=np.float64)
    for i in range(u.shape[0]):
        if not free_mask[i]:
            out[i] = u[i]
            continue
        acc = rhs[i]
        for k in range(indptr[i], indptr[i + 1]):
            j = indices[k]
            if j != i:
                acc -= data[k] * u[j]
        out[i] = acc / diag[i]
    return out
