# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_pykernels``.

Complex products are written out in real arithmetic: C99 complex
multiplication goes through the NaN-aware ``__muldc3`` helper and is several
times slower.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

BACKEND = "cython"


def character_sum(const double complex[::1] values,
                  const long[:, ::1] phase,
                  const double complex[::1] roots):
    cdef Py_ssize_t n_out = phase.shape[0], n_in = phase.shape[1]
    cdef Py_ssize_t r, c
    cdef double re, im, vr, vi, wr, wi
    cdef double complex rt
    out = np.empty(n_out, dtype=np.complex128)
    cdef double complex[::1] o = out
    with nogil:
        for r in range(n_out):
            re = 0.0
            im = 0.0
            for c in range(n_in):
                vr = values[c].real
                vi = values[c].imag
                rt = roots[phase[r, c]]
                wr = rt.real
                wi = rt.imag
                re = re + vr * wr - vi * wi
                im = im + vr * wi + vi * wr
            o[r] = re + 1j * im
    return out


def stft_table(const double complex[::1] f,
               const double complex[::1] g,
               const long[:, ::1] diff,
               const long[:, ::1] phase,
               const double complex[::1] roots):
    """Windowed products are formed here; the dense (n x n) @ (n x n) product
    goes to BLAS, which a scalar triple loop does not beat."""
    cdef Py_ssize_t n = f.shape[0]
    cdef Py_ssize_t x, y
    cdef double ar, ai, br, bi
    windowed = np.empty((n, n), dtype=np.complex128)
    kernel = np.empty((n, n), dtype=np.complex128)
    cdef double complex[:, ::1] w = windowed
    cdef double complex[:, ::1] k = kernel
    with nogil:
        for x in range(n):
            # w[x, y] = f[y] * conj(g[y - x]);  k[y, xi] = roots[phase[xi, y]]
            for y in range(n):
                ar = f[y].real
                ai = f[y].imag
                br = g[diff[y, x]].real
                bi = -g[diff[y, x]].imag
                w[x, y] = (ar * br - ai * bi) + 1j * (ar * bi + ai * br)
                k[x, y] = roots[phase[y, x]]
    return windowed @ kernel


def soft_threshold(const double complex[::1] z, double tau):
    cdef Py_ssize_t n = z.shape[0], i
    cdef double mag, s, zr, zi
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] o = out
    with nogil:
        for i in range(n):
            zr = z[i].real
            zi = z[i].imag
            mag = sqrt(zr * zr + zi * zi)
            if mag > tau:
                s = 1.0 - tau / mag
                o[i] = zr * s + 1j * (zi * s)
            else:
                o[i] = 0
    return out
