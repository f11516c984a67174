# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled gate-application kernels (hot inner loops of circuit simulation)."""
import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.complex128_t cplx


def apply_single_qubit(const cplx[::1] state, const cplx[:, ::1] gate, Py_ssize_t target):
    cdef Py_ssize_t n = state.shape[0]
    cdef Py_ssize_t groups = n >> 1
    cdef Py_ssize_t tk = 1 << target
    cdef Py_ssize_t g, i0, i1
    cdef cplx a, b
    cdef cplx g00 = gate[0, 0], g01 = gate[0, 1]
    cdef cplx g10 = gate[1, 0], g11 = gate[1, 1]

    out_arr = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    for g in range(groups):
        i0 = ((g >> target) << (target + 1)) | (g & (tk - 1))
        i1 = i0 | tk
        a = state[i0]
        b = state[i1]
        out[i0] = g00 * a + g01 * b
        out[i1] = g10 * a + g11 * b
    return out_arr


def apply_multi_qubit(const cplx[::1] state, const cplx[:, ::1] gate, targets):
    cdef Py_ssize_t n = state.shape[0]
    cdef Py_ssize_t n_bits = 0
    while (1 << n_bits) < n:
        n_bits += 1
    cdef Py_ssize_t k = len(targets)
    cdef Py_ssize_t dim = 1 << k
    cdef Py_ssize_t groups = n >> k

    tgt_arr = np.asarray(targets, dtype=np.intp)
    cdef Py_ssize_t[::1] tgt = tgt_arr
    rest_arr = np.array([b for b in range(n_bits) if b not in set(targets)], dtype=np.intp)
    cdef Py_ssize_t[::1] rest = rest_arr

    # offsets[p]: contribution of local pattern p on the target bits
    off_arr = np.zeros(dim, dtype=np.intp)
    cdef Py_ssize_t[::1] off = off_arr
    cdef Py_ssize_t p, j, g, base, r, c
    for p in range(dim):
        for j in range(k):
            if (p >> j) & 1:
                off[p] |= 1 << tgt[j]

    out_arr = np.array(state, copy=True)
    cdef cplx[::1] out = out_arr
    scratch_arr = np.empty(dim, dtype=np.complex128)
    cdef cplx[::1] scratch = scratch_arr
    cdef cplx acc

    for g in range(groups):
        base = 0
        for j in range(n_bits - k):
            if (g >> j) & 1:
                base |= 1 << rest[j]
        for p in range(dim):
            scratch[p] = state[base | off[p]]
        for r in range(dim):
            acc = 0
            for c in range(dim):
                acc = acc + gate[r, c] * scratch[c]
            out[base | off[r]] = acc
    return out_arr
