"""Dense truncated power-series kernels.

The compiled extension is used when it was built; otherwise the numpy
fallback is imported. Set ``STATPHASE_PURE_PYTHON=1`` to force the fallback.
"""
import os

import numpy as np

from . import _kernels_py

if os.environ.get("STATPHASE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def _c(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


# numpy's convolution beats the compiled double loop on long series
CROSSOVER = 40


def mul_trunc(a, b, n):
    impl = _kernels_py if n >= CROSSOVER else _impl
    return impl.mul_trunc(_c(a), _c(b), int(n))


def compose_trunc(f, g, n):
    impl = _kernels_py if n >= CROSSOVER else _impl
    return impl.compose_trunc(_c(f), _c(g), int(n))


def pow_unit(a, alpha, n):
    return _impl.pow_unit(_c(a), float(alpha), int(n))


def inv_unit(a, n):
    """``1 / a`` for a unit series."""
    return pow_unit(a, -1.0, n)


def deriv(a):
    """Derivative of an ordinary power series."""
    a = _c(a)
    if len(a) <= 1:
        return np.zeros(max(len(a) - 1, 0), dtype=np.complex128)
    return a[1:] * np.arange(1, len(a))


def reversion(h, n):
    """Solve ``x * h(x) = t`` for ``x = X(t)``, first ``n`` coefficients.

    ``h`` is a unit series. Newton iteration with precision doubling.
    """
    h = _c(h)
    if len(h) == 0 or h[0] != 1:
        raise ValueError("reversion needs h[0] == 1")
    x = np.zeros(n, dtype=np.complex128)
    if n <= 1:
        return x
    x[1] = 1.0
    dh = deriv(h)
    m = 2
    while True:
        m = min(2 * m, n)
        xm = x[:m]
        hx = compose_trunc(h, xm, m)
        dhx = compose_trunc(dh, xm, m) if len(dh) else np.zeros(m, dtype=np.complex128)
        resid = mul_trunc(xm, hx, m)
        resid[1] -= 1.0
        jac = hx + mul_trunc(xm, dhx, m)  # jac[0] == 1
        step = mul_trunc(resid, inv_unit(jac, m), m)
        x = np.concatenate([xm - step, np.zeros(n - m, dtype=np.complex128)])
        if m == n:
            break
    # one more full-length pass absorbs the last doubling's error
    hx = compose_trunc(h, x, n)
    dhx = compose_trunc(dh, x, n) if len(dh) else np.zeros(n, dtype=np.complex128)
    resid = mul_trunc(x, hx, n)
    resid[1] -= 1.0
    jac = hx + mul_trunc(x, dhx, n)
    return x - mul_trunc(resid, inv_unit(jac, n), n)
