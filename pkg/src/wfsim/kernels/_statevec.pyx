# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled state-vector kernels: gather/scatter over target bit positions.

Same contracts as the reference backend. Register position 0 is the most
significant bit of the flat index; targets wider than 6 qubits fall back
to the reference implementation (never reached by this package's gates).
"""

import numpy as np

from libc.math cimport sqrt

from . import reference as _reference

BACKEND_NAME = "compiled"


def apply_matrix(object amps, Py_ssize_t n, object u, object positions):
    """Apply a 2^k x 2^k matrix at the given register positions."""
    cdef Py_ssize_t k = len(positions)
    if k > 6 or n > 62:
        return _reference.apply_matrix(amps, n, u, positions)

    src_arr = np.ascontiguousarray(amps, dtype=np.complex128)
    mat_arr = np.ascontiguousarray(u, dtype=np.complex128)
    out_arr = np.empty(1 << n, dtype=np.complex128)
    cdef const double complex[::1] src = src_arr
    cdef const double complex[:, ::1] mat = mat_arr
    cdef double complex[::1] out = out_arr

    cdef Py_ssize_t dim = 1 << k
    cdef Py_ssize_t[6] tbit
    cdef Py_ssize_t[64] spread
    cdef Py_ssize_t[62] slots
    cdef double complex[64] gathered
    cdef Py_ssize_t t, j, m, b, r, base, nslots
    cdef bint is_target
    cdef double complex acc

    for t in range(k):
        tbit[t] = n - 1 - <Py_ssize_t> positions[t]
    for j in range(dim):
        spread[j] = 0
        for t in range(k):
            if (j >> (k - 1 - t)) & 1:
                spread[j] |= (<Py_ssize_t> 1) << tbit[t]
    nslots = 0
    for b in range(n):
        is_target = False
        for t in range(k):
            if tbit[t] == b:
                is_target = True
                break
        if not is_target:
            slots[nslots] = b
            nslots += 1

    for r in range(1 << nslots):
        base = 0
        for t in range(nslots):
            if (r >> t) & 1:
                base |= (<Py_ssize_t> 1) << slots[t]
        for j in range(dim):
            gathered[j] = src[base | spread[j]]
        for j in range(dim):
            acc = 0
            for m in range(dim):
                acc = acc + mat[j, m] * gathered[m]
            out[base | spread[j]] = acc
    return out_arr


def z_weights(object amps, Py_ssize_t n, Py_ssize_t position):
    """Return (weight of bit 0, weight of bit 1) at a register position."""
    src_arr = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef const double complex[::1] src = src_arr
    cdef Py_ssize_t lsb = n - 1 - position
    cdef double w0 = 0.0
    cdef double w1 = 0.0
    cdef double mag
    cdef double complex a
    cdef Py_ssize_t i
    for i in range(1 << n):
        a = src[i]
        mag = a.real * a.real + a.imag * a.imag
        if (i >> lsb) & 1:
            w1 += mag
        else:
            w0 += mag
    return w0, w1


def project_z(object amps, Py_ssize_t n, Py_ssize_t position, Py_ssize_t bit):
    """Project onto a Z outcome; returns (renormalized amplitudes, weight)."""
    out_arr = np.array(amps, dtype=np.complex128, copy=True)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t lsb = n - 1 - position
    cdef double weight = 0.0
    cdef double inv
    cdef double complex a
    cdef Py_ssize_t i
    for i in range(1 << n):
        if ((i >> lsb) & 1) != bit:
            out[i] = 0
        else:
            a = out[i]
            weight += a.real * a.real + a.imag * a.imag
    if weight > 0.0:
        inv = 1.0 / sqrt(weight)
        for i in range(1 << n):
            out[i] = out[i] * inv
    return out_arr, weight
