# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch kernels for the Hermitian form of signature (3,1).

Mirrors ``_kernels_py`` exactly; the selection happens in ``chfn.kernels``.
"""
import numpy as np
cimport numpy as cnp

cdef extern from "complex.h" nogil:
    double complex conj(double complex)
    double carg(double complex)
    double cabs(double complex)

ctypedef double complex cplx


cdef inline cplx _form(const cplx[:] z, const cplx[:] w) noexcept nogil:
    # <z, w> = z1 conj(w4) + z2 conj(w2) + z3 conj(w3) + z4 conj(w1)
    return z[0] * conj(w[3]) + z[1] * conj(w[1]) + z[2] * conj(w[2]) + z[3] * conj(w[0])


def herm_form_batch(const cplx[:, :] z, const cplx[:, :] w):
    cdef Py_ssize_t n = z.shape[0], i
    out = np.empty(n, dtype=np.complex128)
    cdef cplx[:] o = out
    with nogil:
        for i in range(n):
            o[i] = _form(z[i], w[i])
    return out


cdef inline cplx _cr(const cplx[:] z1, const cplx[:] z2, const cplx[:] z3,
                     const cplx[:] z4) noexcept nogil:
    return (_form(z3, z1) * _form(z4, z2)) / (_form(z4, z1) * _form(z3, z2))


def cross_ratio_triples(const cplx[:, :, :] q):
    """(N, 4, 4) lifts -> (N, 3) cross-ratio triples."""
    cdef Py_ssize_t n = q.shape[0], i
    out = np.empty((n, 3), dtype=np.complex128)
    cdef cplx[:, :] o = out
    with nogil:
        for i in range(n):
            o[i, 0] = _cr(q[i, 0], q[i, 1], q[i, 2], q[i, 3])
            o[i, 1] = _cr(q[i, 0], q[i, 2], q[i, 1], q[i, 3])
            o[i, 2] = _cr(q[i, 1], q[i, 2], q[i, 0], q[i, 3])
    return out


def cartan_batch(const cplx[:, :, :] q):
    """(N, 3, 4) lifts -> (N,) angular invariants."""
    cdef Py_ssize_t n = q.shape[0], i
    cdef cplx p
    out = np.empty(n, dtype=np.float64)
    cdef double[:] o = out
    with nogil:
        for i in range(n):
            p = -(_form(q[i, 0], q[i, 1]) * _form(q[i, 1], q[i, 2]) * _form(q[i, 2], q[i, 0]))
            o[i] = carg(p)
    return out
