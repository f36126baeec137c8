# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for arithmetic in Z_2^64.

The ring matrix product is the hot inner loop of the secure engine
(every Beaver multiplication of tensors ends up here), so it gets a
C implementation.  Unsigned overflow is well-defined in C, giving the
mod-2^64 wraparound for free.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def ring_matmul(cnp.ndarray a_in, cnp.ndarray b_in):
    """Matrix product of uint64 arrays, wrapping mod 2^64."""
    cdef cnp.uint64_t[:, ::1] a = np.ascontiguousarray(a_in, dtype=np.uint64)
    cdef cnp.uint64_t[:, ::1] b = np.ascontiguousarray(b_in, dtype=np.uint64)
    cdef Py_ssize_t n = a.shape[0], k = a.shape[1], m = b.shape[1]
    if b.shape[0] != k:
        raise ValueError("matmul shape mismatch")
    out = np.zeros((n, m), dtype=np.uint64)
    cdef cnp.uint64_t[:, ::1] c = out
    cdef Py_ssize_t i, j, l
    cdef cnp.uint64_t acc
    for i in range(n):
        for l in range(k):
            acc = a[i, l]
            for j in range(m):
                c[i, j] += acc * b[l, j]
    return out


def trunc_shift(cnp.ndarray v_in, int shift):
    """Arithmetic right shift of the two's-complement signed view."""
    cdef cnp.uint64_t[::1] v = np.ascontiguousarray(v_in, dtype=np.uint64).ravel()
    cdef Py_ssize_t n = v.shape[0]
    out = np.empty(n, dtype=np.uint64)
    cdef cnp.uint64_t[::1] o = out
    cdef Py_ssize_t i
    cdef cnp.int64_t s
    for i in range(n):
        s = <cnp.int64_t> v[i]
        o[i] = <cnp.uint64_t> (s >> shift)
    return out.reshape(np.asarray(v_in).shape)
