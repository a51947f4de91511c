# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweep kernels for the monotone local-solve (lift) iteration.

The operators are symmetric M-matrices in CSR form.  A "local solve" at node
i replaces u_i by the exact solution of the one-node patch problem given its
neighbours; a sweep applies this at every free node in lexicographic order.
"""

import numpy as np


def lift_sweep(long long[::1] indptr, long long[::1] indices, double[::1] data,
               double[::1] diag, double[::1] rhs, double[::1] u,
               unsigned char[::1] free_mask):
    """One in-place sweep of single-node local solves; returns max |update|."""
    cdef Py_ssize_t i, k, n = u.shape[0]
    cdef long long j
    cdef double acc, unew, change, max_change = 0.0
    for i in range(n):
        if not free_mask[i]:
            continue
        acc = rhs[i]
        for k in range(indptr[i], indptr[i + 1]):
            j = indices[k]
            if j != i:
                acc -= data[k] * u[j]
        unew = acc / diag[i]
        change = unew - u[i]
        if change < 0.0:
            change = -change
        if change > max_change:
            max_change = change
        u[i] = unew
    return max_change


def local_solve_values(long long[::1] indptr, long long[::1] indices,
                       double[::1] data, double[::1] diag, double[::1] rhs,
                       double[::1] u, unsigned char[::1] free_mask):
    """Local-solve value at every free node, without mutating u.

    Fixed nodes keep their current value.  Used for the supersolution check:
    u is a discrete supersolution iff the returned values nowhere exceed u.
    """
    cdef Py_ssize_t i, k, n = u.shape[0]
    cdef long long j
    cdef double acc
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] out_v = out
    for i in range(n):
        if not free_mask[i]:
            out_v[i] = u[i]
            continue
        acc = rhs[i]
        for k in range(indptr[i], indptr[i + 1]):
            j = indices[k]
            if j != i:
                acc -= data[k] * u[j]
        out_v[i] = acc / diag[i]
    return out
