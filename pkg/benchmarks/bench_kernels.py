"""Time the compiled series kernels against the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``. Both backends are imported
directly, so the environment switch is not needed here. The last block times
a full forward transform in a subprocess for each backend.
"""
import os
import subprocess
import sys
import timeit

import numpy as np

from statphase import _kernels_py as py

try:
    from statphase import _kernels as cy
except ImportError:  # extension not built
    cy = None

SIZES = (8, 32, 128)  # the package routes products of length >= kernels.CROSSOVER to numpy
END_TO_END = """
import random, sys, time
sys.path.insert(0, 'tests')
from corpus import random_dataset
from statphase.fourier import fourier_transform
sets = [random_dataset(random.Random(s)) for s in range(40)]
t = time.perf_counter()
for d in sets:
    fourier_transform(d)
from statphase.kernels import BACKEND
print(BACKEND, time.perf_counter() - t)
"""


def _series(rng, n, unit=False):
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    if unit:
        a[0] = 1
    return a.astype(np.complex128)


def _cases(mod, n, rng):
    a, b = _series(rng, n), _series(rng, n)
    u = _series(rng, n, unit=True)
    g = _series(rng, n)
    g[0] = 0
    return {
        "mul_trunc": lambda: mod.mul_trunc(a, b, n),
        "compose_trunc": lambda: mod.compose_trunc(a, g, n),
        "pow_unit": lambda: mod.pow_unit(u, 1.5, n),
    }


def _best(fn, number=20, repeat=5):
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def kernels():
    print(f"{'kernel':<14}{'n':>5}{'python (us)':>14}{'cython (us)':>14}{'speedup':>9}")
    for n in SIZES:
        rng = np.random.default_rng(n)
        pcases = _cases(py, n, rng)
        ccases = _cases(cy, n, np.random.default_rng(n)) if cy else {}
        for name, fn in pcases.items():
            tp = _best(fn) * 1e6
            if cy:
                tc = _best(ccases[name]) * 1e6
                print(f"{name:<14}{n:>5}{tp:>14.1f}{tc:>14.1f}{tp / tc:>9.1f}")
            else:
                print(f"{name:<14}{n:>5}{tp:>14.1f}{'n/a':>14}{'':>9}")


def end_to_end():
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    for label, flag in (("cython", "0"), ("python", "1")):
        env = dict(os.environ, STATPHASE_PURE_PYTHON=flag)
        env.update(PYTHONPATH=os.path.join(root, "src"))
        out = subprocess.run(
            [sys.executable, "-c", END_TO_END], cwd=root, env=env, capture_output=True, text=True, check=True
        )
        backend, secs = out.stdout.split()
        assert backend == label, backend
        print(f"forward transform, 40 data sets, {label}: {float(secs):.3f} s")


if __name__ == "__main__":
    kernels()
    end_to_end()
