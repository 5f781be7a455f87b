"""Pure numpy versions of the dense series kernels in ``_kernels.pyx``."""
import numpy as np


def mul_trunc(a, b, n):
    """First ``n`` coefficients of ``a * b``."""
    out = np.zeros(n, dtype=np.complex128)
    if len(a) == 0 or len(b) == 0 or n == 0:
        return out
    prod = np.convolve(a[:n], b[:n])[:n]
    out[: len(prod)] = prod
    return out


def compose_trunc(f, g, n):
    """First ``n`` coefficients of ``f(g(t))``; requires ``g[0] == 0``."""
    if len(g) and g[0] != 0:
        raise ValueError("inner series must have zero constant term")
    out = np.zeros(n, dtype=np.complex128)
    if len(f) == 0 or n == 0:
        return out
    g = np.asarray(g[:n], dtype=np.complex128)
    out[0] = f[-1]
    for k in range(len(f) - 2, -1, -1):
        out = mul_trunc(out, g, n)
        out[0] += f[k]
    return out


def pow_unit(a, alpha, n):
    """First ``n`` coefficients of ``a**alpha`` for a unit series ``a[0] == 1``."""
    if len(a) == 0 or a[0] != 1:
        raise ValueError("pow_unit needs a[0] == 1")
    a = np.asarray(a, dtype=np.complex128)
    b = np.zeros(n, dtype=np.complex128)
    if n == 0:
        return b
    b[0] = 1
    for k in range(1, n):
        jmax = min(k, len(a) - 1)
        if jmax < 1:
            continue
        j = np.arange(1, jmax + 1)
        b[k] = np.sum(((alpha + 1.0) * j - k) * a[1 : jmax + 1] * b[k - j]) / k
    return b
