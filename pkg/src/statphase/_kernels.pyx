# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled dense kernels for truncated power series.

Arrays hold coefficients of ordinary power series ``a[0] + a[1] t + ...``.
Every function returns a fresh ``complex128`` array of length ``n``.
"""
import numpy as np

ctypedef double complex cplx


def mul_trunc(const cplx[::1] a, const cplx[::1] b, Py_ssize_t n):
    """First ``n`` coefficients of ``a * b``."""
    out = np.zeros(n, dtype=np.complex128)
    cdef cplx[::1] c = out
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0]
    cdef Py_ssize_t i, j, jmax
    cdef cplx ai
    for i in range(min(na, n)):
        ai = a[i]
        if ai == 0:
            continue
        jmax = min(nb, n - i)
        for j in range(jmax):
            c[i + j] += ai * b[j]
    return out


def compose_trunc(const cplx[::1] f, const cplx[::1] g, Py_ssize_t n):
    """First ``n`` coefficients of ``f(g(t))``; requires ``g[0] == 0``."""
    if g.shape[0] and g[0] != 0:
        raise ValueError("inner series must have zero constant term")
    out = np.zeros(n, dtype=np.complex128)
    cdef cplx[::1] r = out
    cdef cplx[::1] tmp = np.zeros(n, dtype=np.complex128)
    cdef Py_ssize_t nf = f.shape[0], ng = g.shape[0]
    cdef Py_ssize_t k, i, j, jmax
    cdef cplx ri
    if nf == 0 or n == 0:
        return out
    r[0] = f[nf - 1]
    for k in range(nf - 2, -1, -1):
        # r <- r * g + f[k]; g has no constant term so r*g starts at t^1
        for i in range(n):
            tmp[i] = 0
        for i in range(n):
            ri = r[i]
            if ri == 0:
                continue
            jmax = min(ng, n - i)
            for j in range(1, jmax):
                tmp[i + j] += ri * g[j]
        for i in range(n):
            r[i] = tmp[i]
        r[0] += f[k]
    return out


def pow_unit(const cplx[::1] a, double alpha, Py_ssize_t n):
    """First ``n`` coefficients of ``a**alpha`` for a unit series ``a[0] == 1``.

    Uses the J. C. P. Miller recurrence, O(n^2).
    """
    if a.shape[0] == 0 or a[0] != 1:
        raise ValueError("pow_unit needs a[0] == 1")
    out = np.zeros(n, dtype=np.complex128)
    cdef cplx[::1] b = out
    cdef Py_ssize_t na = a.shape[0], k, j, jmax
    cdef cplx acc
    if n == 0:
        return out
    b[0] = 1
    for k in range(1, n):
        acc = 0
        jmax = min(k, na - 1)
        for j in range(1, jmax + 1):
            acc += ((alpha + 1.0) * j - k) * a[j] * b[k - j]
        b[k] = acc / k
    return out
