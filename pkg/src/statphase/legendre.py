"""Legendre transform of admissible Puiseux germs.

For an admissible directed germ ``(a, theta, f)`` the transform
``(b, eta, g)`` is determined by::

    w = f'(z),    z = -g'(w),    z*w - f(z) + g(w) = 0.

Every case is reduced to ordinary power series. With ``u`` the source
coordinate (``z - a`` or ``1/z``) and ``x = u**(1/p)``, the target
coordinate ``v`` (``1/w`` or ``w - b``) reads ``v = kappa * x**M * H(x)``
with a unit series ``H``. Setting ``t = (v/kappa)**(1/M)`` turns the
inversion into the reversion ``x * H(x)**(1/M) = t`` and ``g`` into a
Laurent series in ``t``; ``t = rho * v**(1/M)`` converts back.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import InadmissibleGerm, MismatchedBasePoint, NotInvertible, TruncationInsufficient
from .puiseux import (
    EPS_ZERO,
    INF,
    TWO_PI,
    BasePoint,
    DirectedGerm,
    Direction,
    PuiseuxGerm,
    _side,
    compose,
    derive,
    is_bounded,
    monodromy,
    mul,
    pole_order,
    sigma,
    turn,
)

DEFAULT_PRECISION = 16
RESIDUAL_TOL = 1e-9
#: relative level below which normalized t-series coefficients count as rounding noise
NOISE_FLOOR = 1e-13

__all__ = [
    "Case",
    "Admissibility",
    "LegendrePair",
    "classify",
    "invert_series",
    "legendre_transform",
    "inverse_legendre",
    "defining_identity",
    "reflect",
]


class Case(Enum):
    FINITE_TO_INFINITY = "i"
    LINEAR_TWIST_TO_FINITE = "ii"
    INFINITY_TO_INFINITY = "iii"
    INADMISSIBLE = "inadmissible"


@dataclass(frozen=True)
class Admissibility:
    case: Case
    lam: Fraction | None = None
    b: complex | None = None
    reason: str | None = None  # "bounded" or "linear" when inadmissible

    @property
    def admissible(self) -> bool:
        return self.case is not Case.INADMISSIBLE

    @property
    def output_pole_order(self) -> Fraction:
        """Pole order of ``g`` minus its linear part."""
        lam = self.lam
        if self.case is Case.FINITE_TO_INFINITY:
            return lam / (lam + 1)
        if self.case is Case.LINEAR_TWIST_TO_FINITE:
            return lam / (1 - lam)
        if self.case is Case.INFINITY_TO_INFINITY:
            return lam / (lam - 1)
        raise InadmissibleGerm("no output for an inadmissible germ")

    def to_json(self) -> dict:
        out = {"case": self.case.value}
        if self.lam is not None:
            out["lambda"] = str(self.lam)
        if self.b is not None:
            out["b"] = [self.b.real, self.b.imag]
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class LegendrePair:
    source: DirectedGerm
    target: DirectedGerm
    psi: PuiseuxGerm  # z as a function of w, same determination as target
    case: Admissibility
    residual: float
    beta: complex

    @property
    def linear_part(self) -> complex:
        """Coefficient of ``w`` in ``g`` at infinity (``-a`` in the finite-point case)."""
        if self.target.base.is_infinity:
            return self.target.germ.coeff(1)
        return 0j

    def reduced_target(self) -> PuiseuxGerm:
        """``g`` without its linear part."""
        g = self.target.germ
        if not g.base.is_infinity:
            return g
        return g.replace({m: c for m, c in g.terms if m != 1})


# --------------------------------------------------------------------------
# classification


def _linear_split(germ: PuiseuxGerm) -> tuple[complex, PuiseuxGerm]:
    b = germ.coeff(1)
    rest = germ.replace({m: c for m, c in germ.terms if m != 1})
    return b, rest


def classify(f: DirectedGerm) -> Admissibility:
    germ = f.germ
    lam = pole_order(germ)
    if lam == -INF or is_bounded(germ):
        return Admissibility(Case.INADMISSIBLE, reason="bounded")
    if not germ.base.is_infinity:
        return Admissibility(Case.FINITE_TO_INFINITY, lam)
    if lam > 1:
        return Admissibility(Case.INFINITY_TO_INFINITY, lam)
    b, rest = _linear_split(germ)
    if is_bounded(rest):
        return Admissibility(Case.INADMISSIBLE, b=b, reason="linear")
    return Admissibility(Case.LINEAR_TWIST_TO_FINITE, pole_order(rest), b=b)


# --------------------------------------------------------------------------
# series inversion


@dataclass
class _Inversion:
    p: int
    M: int
    kappa: complex
    rho: complex
    X: np.ndarray  # x = X(t), X[1] == 1
    n: int  # U = X / t is known mod t**n
    target: BasePoint
    target_lift: float  # lift of arg of the target direction coordinate


def _x_lattice(germ: PuiseuxGerm, p: int) -> dict[int, complex]:
    """Coefficients in ``x = u**(1/p)``; the term ``c u**(-mu)`` sits at ``-p*mu``."""
    out = {}
    for m, c in germ.terms:
        j = -m * p
        if j.denominator != 1:
            raise ValueError(f"exponent {m} not on the 1/{p} lattice")
        out[int(j)] = c
    return out


def _x_known(germ: PuiseuxGerm, p: int):
    """First unknown x-exponent, or INF."""
    if germ.is_exact:
        return INF
    return math.ceil(germ.known_order * p)


def _source_arg(dir: Direction) -> float:
    """Lifted argument of the source coordinate ``u`` (``z - a`` or ``1/z``)."""
    return -dir.lift if dir.base.is_infinity else dir.lift


def _invert(W: PuiseuxGerm, dir: Direction, p: int, n_terms: int) -> _Inversion:
    nu = pole_order(W)
    if nu == -INF or nu == 0:
        raise NotInvertible("w(z) needs a nonzero pole order")
    xs = _x_lattice(W, p)
    j0 = min(xs)
    gamma = xs[j0]
    T = _x_known(W, p)
    R = INF if T == INF else T - j0
    n = int(min(R, n_terms))
    if n < 1:
        raise TruncationInsufficient("not enough stored terms to invert")
    k = np.zeros(n, dtype=np.complex128)
    k[0] = 1.0
    for j, c in xs.items():
        if 0 < j - j0 < n:
            k[j - j0] = c / gamma
    if nu > 0:
        target = BasePoint.infinity()
        kappa, M, expo = 1 / gamma, int(-j0), -1.0
    else:
        target = BasePoint.finite(0)
        kappa, M, expo = gamma, int(j0), 1.0
    h = kernels.pow_unit(k, expo / M, n)
    X = kernels.reversion(h, n + 1)
    A = cmath.phase(kappa)
    rho = abs(kappa) ** (-1.0 / M) * cmath.exp(-1j * A / M)
    theta_v = A + M / p * _source_arg(dir)
    target_lift = -theta_v if target.is_infinity else theta_v
    return _Inversion(p, M, kappa, rho, X, n, target, target_lift)


def _laurent_germ(offset: int, coeffs, inv: _Inversion, base: BasePoint, known_t) -> PuiseuxGerm:
    """Germ from ``sum_i coeffs[i] t**(offset+i)``, relative to ``inv.target_lift``."""
    terms = {}
    floor = NOISE_FLOOR * max((abs(c) for c in coeffs), default=0.0)
    for i, c in enumerate(coeffs):
        if abs(c) <= floor:
            continue
        j = offset + i
        terms[Fraction(-j, inv.M)] = c * inv.rho**j
    tau = INF if known_t == INF else Fraction(known_t, inv.M)
    return PuiseuxGerm(base, terms, tau)


def _normalize(germ: PuiseuxGerm, lift: float) -> DirectedGerm:
    """Express a germ given relative to ``lift`` at branch 0."""
    k = math.floor(lift / TWO_PI)
    angle = lift - TWO_PI * k
    if angle >= TWO_PI:
        angle -= TWO_PI
        k += 1
    moved = monodromy(germ, k)
    moved = moved.replace({m: _snap(c) for m, c in moved.terms}, ramification=moved.ramification)
    return DirectedGerm(moved, Direction(germ.base, angle if angle > 0 else 0.0, 0))


def _snap(c: complex) -> complex:
    """Zero a real or imaginary part that is rounding noise relative to ``|c|``."""
    tol = NOISE_FLOOR * abs(c)
    re, im = c.real, c.imag
    return complex(0.0 if abs(re) <= tol else re, 0.0 if abs(im) <= tol else im)


def _psi_series(inv: _Inversion, source: BasePoint):
    """``z`` as a Laurent series in ``t``: (offset, coeffs, known_t)."""
    U = inv.X[1 : inv.n + 1]
    p, n = inv.p, inv.n
    if source.is_infinity:
        return -p, kernels.pow_unit(U, -p, n), n - p
    return p, kernels.pow_unit(U, p, n), n + p


def invert_series(w_of_z: PuiseuxGerm, dir: Direction, n_terms: int = DEFAULT_PRECISION) -> DirectedGerm:
    """Inverse ``z = psi(w)`` of ``w = w_of_z(z)`` near ``dir``.

    Returned at branch 0 of the direction reached by ``w``.
    """
    if w_of_z.base != dir.base:
        raise MismatchedBasePoint("germ and direction at different points")
    inv = _invert(w_of_z, dir, w_of_z.ramification, n_terms)
    off, ser, known = _psi_series(inv, w_of_z.base)
    psi = _laurent_germ(off, ser, inv, inv.target, known)
    if not w_of_z.base.is_infinity:
        psi = psi + w_of_z.base.value
    return _normalize(psi, inv.target_lift)


# --------------------------------------------------------------------------
# the transform


def _beta(f: DirectedGerm, adm: Admissibility) -> complex:
    lam, phi = adm.lam, f.dir.angle
    if adm.case is Case.FINITE_TO_INFINITY:
        return -lam * cmath.exp(-1j * float(lam + 1) * phi) * sigma(f.germ, f.dir)
    germ = f.germ
    if adm.case is Case.LINEAR_TWIST_TO_FINITE:
        germ = _linear_split(germ)[1]
    return lam * cmath.exp(1j * float(lam - 1) * phi) * sigma(germ, f.dir)


def _forward(f: DirectedGerm, precision: int) -> LegendrePair:
    adm = classify(f)
    if not adm.admissible:
        raise InadmissibleGerm(f"germ is {adm.reason}")
    germ = f.germ
    p = germ.ramification
    q = int(adm.lam * p)
    T = _x_known(germ, p)
    if T != INF and T + q < precision:
        raise TruncationInsufficient(
            f"input window {T + q} lattice steps, {precision} requested"
        )
    case = adm.case
    work = _linear_split(germ)[1] if case is Case.LINEAR_TWIST_TO_FINITE else germ
    inv = _invert(derive(work), f.dir, p, precision)
    n = inv.n
    U = inv.X[1 : n + 1]
    T_g = int(min(T, n - q))
    L = T_g + q  # coefficients of t**-q ... t**(T_g - 1)
    acc = np.zeros(L, dtype=np.complex128)
    for j, c in _x_lattice(work, p).items():
        if j >= T_g:
            continue
        acc[j + q :] += c * kernels.pow_unit(U, j, T_g - j)
    if case is Case.FINITE_TO_INFINITY:
        zw = kernels.pow_unit(U, p, L) / inv.kappa
    elif case is Case.INFINITY_TO_INFINITY:
        zw = kernels.pow_unit(U, -p, L) / inv.kappa
    else:
        zw = kernels.pow_unit(U, -p, L) * inv.kappa
    acc -= zw
    target_base = inv.target
    if case is Case.LINEAR_TWIST_TO_FINITE:
        target_base = BasePoint.finite(adm.b)
    g = _laurent_germ(-q, acc, inv, target_base, T_g)
    off, ser, known = _psi_series(inv, germ.base)
    psi = _laurent_germ(off, ser, inv, target_base, known)
    if case is Case.FINITE_TO_INFINITY and germ.base.value != 0:
        a = germ.base.value
        g = g + PuiseuxGerm(target_base, {Fraction(1): -a})
    if not germ.base.is_infinity:
        psi = psi + germ.base.value
    target = _normalize(g, inv.target_lift)
    psi_n = _normalize(psi, inv.target_lift).germ
    residual = defining_identity(f, target, psi_n)[0]
    return LegendrePair(f, target, psi_n, adm, residual, _beta(f, adm))


def legendre_transform(f: DirectedGerm, precision: int = DEFAULT_PRECISION) -> LegendrePair:
    """Legendre transform ``(a, theta, f) -> (b, eta, g)``.

    ``precision`` is the number of lattice steps of ``g`` guaranteed from
    its leading term; the target is returned at branch 0.
    """
    return _forward(f, precision)


def reflect(d: DirectedGerm) -> DirectedGerm:
    """Pull back along ``z -> -z``: base ``c -> -c``, direction rotated by ``pi``."""
    germ = d.germ
    s = _side(germ.base)
    terms = {m: c * turn(-s * m / 2) for m, c in germ.terms}
    base = germ.base if germ.base.is_infinity else BasePoint.finite(0j - germ.base.value)
    moved = PuiseuxGerm(base, terms, germ.known_order, germ.ramification)
    return _normalize(moved, d.dir.lift + math.pi)


def inverse_legendre(g: DirectedGerm, precision: int = DEFAULT_PRECISION) -> LegendrePair:
    """Inverse transform ``(b, eta, g) -> (a, theta, f)``.

    ``f(z) = h(-z)`` where ``h`` is the forward transform of ``g`` taken in
    the variable ``w``; this is the inverse symplectic map
    ``(w, zeta) -> (-zeta, w)``.
    """
    fwd = _forward(g, precision)
    target = reflect(fwd.target)
    psi = reflect(DirectedGerm(fwd.psi, fwd.target.dir)).germ
    return LegendrePair(g, target, psi, fwd.case, fwd.residual, -fwd.beta)


def defining_identity(source: DirectedGerm, target: DirectedGerm, psi: PuiseuxGerm):
    """Coefficients of ``z*w - f(psi(w)) + g(w)`` on the guaranteed window.

    Returns ``(relative_residual, coefficients)``; the residual is the
    largest coefficient divided by the largest coefficient among the three
    summands. Sums are taken raw, without cancellation dropping.
    """
    g = target.germ
    order = g.known_order
    zw = mul(psi, PuiseuxGerm.coordinate(g.base))
    fpsi = compose(source.germ, source.dir, DirectedGerm(psi, target.dir), order)
    tau = min(order, zw.known_order, fpsi.known_order)
    raw: dict[Fraction, complex] = {}
    size = 0.0
    for germ, sign in ((zw, 1), (fpsi, -1), (g, 1)):
        for m, c in germ.terms:
            if tau != INF and m <= -tau:
                continue
            raw[m] = raw.get(m, 0j) + sign * c
            size = max(size, abs(c))
    worst = max((abs(c) for c in raw.values()), default=0.0)
    return (worst / size if size else 0.0), raw
