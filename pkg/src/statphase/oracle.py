"""Numeric checks that do not go through the symbolic series machinery.

Germs are evaluated as finite sums (truncation treated as exact). The
saddle equation ``f'(z) = w`` is solved by Newton iteration seeded from the
leading term, and ``g(w)`` is compared with ``f(z*) - z* w``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InadmissibleGerm, NoConvergence, WrongSector
from .legendre import Case, LegendrePair, classify, legendre_transform, _linear_split
from .puiseux import (
    EPS_ZERO,
    TWO_PI,
    BasePoint,
    Comparison,
    DirectedGerm,
    Direction,
    PuiseuxGerm,
    _side,
    derive,
    evaluate_polar,
    is_bounded,
    wrap_angle,
)

__all__ = [
    "SaddleCheck",
    "solve_saddle",
    "verify_pair",
    "verify_direction",
    "scan_stokes",
    "compare_numeric",
]

NEWTON_TOL = 1e-12
MAX_NEWTON = 100
#: relative error below which a saddle sample counts as rounding noise
NOISE_LEVEL = 1e-12


@dataclass(frozen=True)
class Sample:
    w: complex
    z_star: complex
    g_series: complex
    g_saddle: complex

    @property
    def error(self) -> float:
        return abs(self.g_series - self.g_saddle)


@dataclass(frozen=True)
class SaddleCheck:
    w_samples: list[complex]
    max_abs_error: float
    per_sample: list[Sample]
    fitted_exponent: float | None = None
    predicted_exponent: float | None = None

    @property
    def decay_ok(self) -> bool:
        if self.fitted_exponent is None or self.predicted_exponent is None:
            return True
        return abs(self.fitted_exponent - self.predicted_exponent) <= 0.1


def _coord(base: BasePoint, z: complex) -> complex:
    return z if base.is_infinity else z - base.value


def _point(base: BasePoint, coord: complex) -> complex:
    return coord if base.is_infinity else coord + base.value


def _eval_near(f: PuiseuxGerm, coord: complex, ref: float) -> complex:
    """Evaluate with the argument of ``coord`` continued from the lift ``ref``."""
    theta = ref + wrap_angle(cmath.phase(coord) - ref)
    return evaluate_polar(f, abs(coord), theta)


def _half_width(lam) -> float:
    return math.pi / (4 * float(lam))


def solve_saddle(f: DirectedGerm, w: complex) -> complex:
    """Root ``z*`` of ``f'(z) = w`` in the sector of ``f``'s direction."""
    adm = classify(f)
    if not adm.admissible:
        raise InadmissibleGerm(f"germ is {adm.reason}")
    base = f.base
    work, shift = f.germ, 0j
    if adm.case is Case.LINEAR_TWIST_TO_FINITE:
        shift, work = _linear_split(f.germ)
    df = derive(work)
    d2f = derive(df)
    target = w - shift
    mu, gamma = df.terms[0]
    e = _side(base) * float(mu)
    ref = f.dir.lift
    # leading-term seed: gamma * exp(e * (log r + i Theta)) = target
    L = cmath.log(target / gamma)
    best = None
    m0 = round((e * ref - L.imag) / TWO_PI)
    for m in range(m0 - 2, m0 + 3):
        cand = complex(L.real, L.imag + TWO_PI * m) / e
        if best is None or abs(cand.imag - ref) < abs(best.imag - ref):
            best = cand
    theta = best.imag
    coord = cmath.exp(best)
    for _ in range(MAX_NEWTON):
        val = _eval_near(df, coord, theta) - target
        if abs(val) <= NEWTON_TOL * abs(w):
            break
        slope = _eval_near(d2f, coord, theta)
        coord_new = coord - val / slope
        theta = theta + wrap_angle(cmath.phase(coord_new) - theta)
        coord = coord_new
    else:
        raise NoConvergence(f"Newton did not converge for w = {w}")
    if abs(theta - ref) > _half_width(adm.lam):
        raise WrongSector(f"root argument {theta} outside the sector around {ref}")
    return _point(base, coord)


def _saddle_value(f: DirectedGerm, z: complex, w: complex) -> complex:
    coord = _coord(f.base, z)
    return _eval_near(f.germ, coord, f.dir.lift) - z * w


def _target_point(pair: LegendrePair, radius: float) -> complex:
    b = pair.target.base
    lift = pair.target.dir.lift
    if b.is_infinity:
        return radius * cmath.exp(1j * lift)
    return b.value + cmath.exp(1j * lift) / radius


def _tail_exponent(pair: LegendrePair) -> float | None:
    """Exponent (in the radius) of the first term beyond ``g``'s window."""
    g = pair.target.germ
    if g.is_exact:
        return None
    hi = legendre_transform(pair.source, g.window() + 8)
    tau = g.known_order
    big = hi.target.germ.max_abs()
    for m, c in hi.target.germ.terms:
        if m <= -tau and abs(c) > EPS_ZERO * big:
            return float(m)
    return None


def _magnitude(s: Sample) -> float:
    return abs(s.g_saddle) + abs(s.z_star * s.w)


def verify_pair(pair: LegendrePair, radii) -> SaddleCheck:
    """Saddle-point check of ``g`` along the target direction.

    ``radii`` measure distance to the target point on the pole scale: ``|w|``
    at infinity and ``1 / |w - b|`` at a finite point, so the checks tighten
    as the radii grow.
    """
    g = pair.target
    samples = []
    for r in radii:
        w = _target_point(pair, r)
        z = solve_saddle(pair.source, w)
        gs = _eval_near(g.germ, _coord(g.base, w), g.dir.lift)
        samples.append(Sample(w, z, gs, _saddle_value(pair.source, z, w)))
    worst = max((s.error for s in samples), default=0.0)
    predicted = _tail_exponent(pair)
    fitted = None
    # samples whose error is at the rounding level of the saddle value carry no slope
    usable = [(r, s) for r, s in zip(radii, samples) if s.error > NOISE_LEVEL * _magnitude(s)]
    if predicted is not None and len(usable) >= 2:
        xs = np.log(np.asarray([r for r, _ in usable], dtype=float))
        ys = np.log(np.asarray([s.error for _, s in usable]))
        fitted = float(np.polyfit(xs, ys, 1)[0])
    return SaddleCheck([s.w for s in samples], worst, samples, fitted, predicted)


def _neville(xs, ys, x0: float = 0.0):
    p = list(ys)
    n = len(xs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = ((x0 - xs[i + k]) * p[i] + (xs[i] - x0) * p[i + 1]) / (xs[i] - xs[i + k])
    return p[0]


def verify_direction(f: DirectedGerm, eta_predicted: Direction) -> float:
    """Angular distance between the limiting direction of ``f'`` and ``eta_predicted``.

    ``f'`` (minus the linear coefficient in the twisted case) is evaluated
    along the source ray; its argument is extrapolated to the base point in
    the variable ``s = |coord|**(-+1/p)``.
    """
    adm = classify(f)
    if not adm.admissible:
        raise InadmissibleGerm(f"germ is {adm.reason}")
    work = f.germ
    if adm.case is Case.LINEAR_TWIST_TO_FINITE:
        work = _linear_split(work)[1]
    df = derive(work)
    p = max(1, df.ramification)
    ss = [0.02 * 0.7**k for k in range(8)]
    args = []
    prev = None
    for s in ss:
        r = s ** (-p) if f.base.is_infinity else s**p
        a = cmath.phase(evaluate_polar(df, r, f.dir.lift))
        if prev is not None:
            a = prev + wrap_angle(a - prev)
        args.append(a)
        prev = a
    limit = _neville(ss, args)
    return abs(wrap_angle(limit - eta_predicted.angle))


# --------------------------------------------------------------------------
# brute-force Stokes geometry


#: log of the sampling radius (pole scale); far enough that every lower
#: term is suppressed by at least exp(-LOG_RADIUS / 12)
LOG_RADIUS = 2000.0
#: normalized values below this at a grid point count as a zero there
_GRID_ZERO = 1e-12


def _re_dir(d: PuiseuxGerm, theta: float) -> float:
    """Normalized ``Re d`` at pole-scale log radius ``LOG_RADIUS``, argument ``theta``.

    Terms are rescaled by the largest exponent so nothing overflows.
    """
    s = _side(d.base)
    logr = LOG_RADIUS if d.base.is_infinity else -LOG_RADIUS
    top = max(float(m) for m, _ in d.terms)
    v = 0j
    for m, c in d.terms:
        mf = float(m)
        v += c * cmath.exp(s * mf * complex(logr, theta) - (top * LOG_RADIUS))
    return v.real / abs(v) if v != 0 else 0.0


def scan_stokes(f: PuiseuxGerm, h: PuiseuxGerm, grid: int = 2048) -> list[float]:
    """Angles in ``[0, 2 pi)`` where ``Re(h - f)`` changes sign near the base point.

    Sign changes on a uniform grid are refined by bisection; ``f`` and ``h``
    use their branch-0 determinations.
    """
    d = h - f
    if is_bounded(d):
        return []
    ts = np.linspace(0.0, TWO_PI, grid + 1)
    vals = [_re_dir(d, float(t)) for t in ts]
    roots = []
    for k in range(grid):
        a, b = float(ts[k]), float(ts[k + 1])
        fa, fb = vals[k], vals[k + 1]
        if abs(fa) < _GRID_ZERO:
            roots.append(a)
            continue
        if fa * fb > 0 or abs(fb) < _GRID_ZERO:
            continue
        for _ in range(80):
            m = 0.5 * (a + b)
            fm = _re_dir(d, m)
            if fa * fm <= 0:
                b = m
            else:
                a, fa = m, fm
        roots.append(0.5 * (a + b))
    # a root at the 0 / 2 pi seam may be found from either side
    out: list[float] = []
    for r in sorted(0.0 if TWO_PI - r <= 1e-9 else r for r in roots):
        if not out or r - out[-1] > 1e-9:
            out.append(r)
    if len(out) > 1 and out[0] + TWO_PI - out[-1] <= 1e-9:
        out.pop()
    return out


def compare_numeric(f: PuiseuxGerm, h: PuiseuxGerm, dir: Direction) -> Comparison:
    """Sign of ``Re(h - f)`` at an extreme radius along ``dir``."""
    d = h - f
    if is_bounded(d):
        return Comparison.EQUIVALENT
    v = _re_dir(d, dir.lift)
    if abs(v) < 1e-6:
        return Comparison.INCOMPARABLE
    return Comparison.STRICTLY_BELOW if v < 0 else Comparison.STRICTLY_ABOVE
