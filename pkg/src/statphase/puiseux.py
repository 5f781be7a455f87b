"""Truncated Puiseux germs at a point of the projective line.

A germ at base point ``a`` is stored in the *pole scale*::

    f = sum_mu  c_mu * z_a**(-mu)  +  O(z_a**tau)

with exact rational exponents ``mu`` and complex coefficients. The local
coordinate is ``z_a = z - a`` at a finite point and ``z_inf = 1/z`` at
infinity, so at infinity the term ``c * z_inf**(-mu)`` is ``c * z**mu`` and
positive ``mu`` always means growth at the base point.

``tau`` (``known_order``) is in the coordinate scale: every term with
``mu > -tau`` is stored, everything else is unknown. ``tau = INF`` marks an
exact germ (a finite sum).

Fractional powers need a determination. A :class:`Direction` carries an
angle ``phi`` in ``[0, 2 pi)`` and an integer branch ``k``; the lifted
argument ``Theta = phi + 2 pi k`` of the direction coordinate (``z_a`` at a
finite point, ``z`` at infinity) fixes the value of every power::

    finite:    z_a**(-mu) = |z_a|**(-mu) * exp(-1j * mu * Theta)
    infinity:  z**mu      = |z|**mu      * exp(+1j * mu * Theta)
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .errors import (
    BranchMismatch,
    DenominatorMismatch,
    IndeterminateOrder,
    MismatchedBasePoint,
    OutOfSector,
    TruncationInsufficient,
    ZeroGerm,
)

INF = math.inf
TWO_PI = 2.0 * math.pi

#: relative tolerance for cancellation, comparison zero-tests and class equality
EPS_ZERO = 1e-10


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**6)
    return Fraction(x)


def turn(frac: Fraction) -> complex:
    """``exp(2 pi i frac)``, exact at quarter turns."""
    r = frac % 1
    if r == 0:
        return 1 + 0j
    if r == Fraction(1, 2):
        return -1 + 0j
    if r == Fraction(1, 4):
        return 1j
    if r == Fraction(3, 4):
        return -1j
    return cmath.exp(2j * math.pi * float(r))


def wrap_angle(x: float) -> float:
    """Representative of ``x`` in ``(-pi, pi]``."""
    y = math.remainder(x, TWO_PI)
    return math.pi if y == -math.pi else y


# --------------------------------------------------------------------------
# points and directions


@dataclass(frozen=True)
class BasePoint:
    """A point of the projective line; ``value is None`` means infinity."""

    value: complex | None = None

    @classmethod
    def finite(cls, a) -> "BasePoint":
        return cls(complex(a))

    @classmethod
    def infinity(cls) -> "BasePoint":
        return cls(None)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def __str__(self):
        if self.value is None:
            return "inf"
        return format_complex(self.value)


def format_complex(c: complex) -> str:
    re, im = float(c.real) + 0.0, float(c.imag) + 0.0
    if im == 0:
        return repr(re)
    if re == 0:
        return f"{im!r}i"
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{re!r}{sign}{abs(im)!r}i"


@dataclass(frozen=True)
class Direction:
    """A point of the circle of directions at ``base`` plus a branch lift."""

    base: BasePoint
    angle: float
    branch: int = 0

    def __post_init__(self):
        if not (0.0 <= self.angle < TWO_PI):
            raise ValueError(f"angle {self.angle} outside [0, 2pi)")
        if self.branch < 0:
            raise ValueError("branch must be non-negative")

    @property
    def lift(self) -> float:
        return self.angle + TWO_PI * self.branch

    @classmethod
    def from_lift(cls, base: BasePoint, theta: float, p: int = 1) -> "Direction":
        k = math.floor(theta / TWO_PI)
        angle = theta - TWO_PI * k
        if angle >= TWO_PI:  # rounding
            angle -= TWO_PI
            k += 1
        return cls(base, angle if angle > 0 else 0.0, k % p)

    def rotated(self, delta: float, p: int = 1) -> "Direction":
        return Direction.from_lift(self.base, self.lift + delta, p)


class Comparison(Enum):
    EQUIVALENT = "equivalent"
    STRICTLY_BELOW = "strictly_below"
    STRICTLY_ABOVE = "strictly_above"
    INCOMPARABLE = "incomparable"


# --------------------------------------------------------------------------
# the germ


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class PuiseuxGerm:
    """Immutable truncated Puiseux germ. See the module docstring."""

    __slots__ = ("base", "ramification", "terms", "known_order", "_fexp")

    def __init__(
        self,
        base: BasePoint,
        terms: Mapping | Iterable = (),
        known_order=INF,
        ramification: int | None = None,
    ):
        items = terms.items() if isinstance(terms, Mapping) else terms
        tau = known_order if known_order == INF else as_fraction(known_order)
        acc: dict[Fraction, complex] = {}
        for mu, c in items:
            mu = as_fraction(mu)
            c = complex(c)
            if tau != INF and mu <= -tau:
                continue
            acc[mu] = acc.get(mu, 0j) + c
        acc = {mu: c for mu, c in acc.items() if c != 0}
        lattice = 1
        for mu in acc:
            lattice = _lcm(lattice, mu.denominator)
        if ramification is None:
            ramification = lattice
        elif ramification < 1 or ramification % lattice:
            raise DenominatorMismatch(
                f"exponent denominators {lattice} do not divide ramification {ramification}"
            )
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "ramification", int(ramification))
        object.__setattr__(self, "terms", tuple(sorted(acc.items(), key=lambda t: -t[0])))
        object.__setattr__(self, "known_order", tau)

    def __setattr__(self, name, value):
        raise AttributeError("PuiseuxGerm is immutable")

    @classmethod
    def _trusted(cls, base, terms: tuple, known_order, ramification: int) -> "PuiseuxGerm":
        """Build from already normalized, sorted terms (internal fast path)."""
        g = object.__new__(cls)
        object.__setattr__(g, "base", base)
        object.__setattr__(g, "ramification", ramification)
        object.__setattr__(g, "terms", terms)
        object.__setattr__(g, "known_order", known_order)
        return g

    # -- constructors

    @classmethod
    def zero(cls, base: BasePoint, known_order=INF) -> "PuiseuxGerm":
        return cls(base, {}, known_order)

    @classmethod
    def constant(cls, base: BasePoint, c) -> "PuiseuxGerm":
        return cls(base, {Fraction(0): c})

    @classmethod
    def coordinate(cls, base: BasePoint) -> "PuiseuxGerm":
        """The global coordinate ``z`` as a germ at ``base``."""
        if base.is_infinity:
            return cls(base, {Fraction(1): 1})
        return cls(base, {Fraction(0): base.value, Fraction(-1): 1})

    def replace(self, terms=None, known_order=None, ramification=None) -> "PuiseuxGerm":
        return PuiseuxGerm(
            self.base,
            dict(self.terms) if terms is None else terms,
            self.known_order if known_order is None else known_order,
            ramification,
        )

    # -- inspection

    @property
    def is_exact(self) -> bool:
        return self.known_order == INF

    def coeff(self, mu) -> complex:
        mu = as_fraction(mu)
        for m, c in self.terms:
            if m == mu:
                return c
        return 0j

    def as_dict(self) -> dict:
        return dict(self.terms)

    def max_abs(self) -> float:
        return max((abs(c) for _, c in self.terms), default=0.0)

    def leading(self) -> tuple[Fraction, complex]:
        lam = pole_order(self)
        if lam == -INF:
            raise ZeroGerm("zero germ has no leading term")
        return self.terms[0]

    def polar_part(self) -> "PuiseuxGerm":
        """Terms with positive pole order, as an exact germ."""
        if not self.is_exact and self.known_order < 0:
            raise TruncationInsufficient("polar part not determined by stored terms")
        return PuiseuxGerm(self.base, {m: c for m, c in self.terms if m > 0}, INF)

    def truncated(self, known_order) -> "PuiseuxGerm":
        tau = min(self.known_order, as_fraction(known_order))
        return PuiseuxGerm(self.base, dict(self.terms), tau, None)

    def window(self) -> int:
        """Number of lattice positions from the leading term up to ``known_order``."""
        if self.is_exact:
            return 10**9
        lam = pole_order(self)
        top = lam if lam != -INF else -self.known_order
        p = self.ramification
        return max(0, math.ceil(p * (top + self.known_order)))

    # -- arithmetic sugar

    def __add__(self, other):
        if not isinstance(other, PuiseuxGerm):
            other = PuiseuxGerm.constant(self.base, other)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return scale(self, -1)

    def __sub__(self, other):
        if not isinstance(other, PuiseuxGerm):
            other = PuiseuxGerm.constant(self.base, other)
        return add(self, -other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, PuiseuxGerm):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, PuiseuxGerm):
            return NotImplemented
        return (
            self.base == other.base
            and self.ramification == other.ramification
            and self.terms == other.terms
            and self.known_order == other.known_order
        )

    def __hash__(self):
        return hash((self.base, self.ramification, self.terms, self.known_order))

    def allclose(self, other: "PuiseuxGerm", rtol: float = 1e-9) -> bool:
        """Coefficientwise closeness, ignoring ramification and known order."""
        if self.base != other.base:
            return False
        a, b = self.as_dict(), other.as_dict()
        scale_ = max(self.max_abs(), other.max_abs(), 1e-300)
        for mu in set(a) | set(b):
            if abs(a.get(mu, 0j) - b.get(mu, 0j)) > rtol * scale_:
                return False
        return True

    def __repr__(self):
        body = " + ".join(f"({format_complex(c)})*z^[{m}]" for m, c in self.terms) or "0"
        tau = "exact" if self.is_exact else f"O({self.known_order})"
        return f"PuiseuxGerm<{self.base}; p={self.ramification}; {body}; {tau}>"


@dataclass(frozen=True)
class DirectedGerm:
    """A germ together with the direction fixing its determination."""

    germ: PuiseuxGerm
    dir: Direction

    def __post_init__(self):
        if self.germ.base != self.dir.base:
            raise MismatchedBasePoint("germ and direction live at different points")

    @property
    def base(self) -> BasePoint:
        return self.germ.base

    def normalized(self) -> "DirectedGerm":
        """The same function expressed at branch 0."""
        k = self.dir.branch
        if k == 0:
            return self
        return DirectedGerm(monodromy(self.germ, k), Direction(self.base, self.dir.angle, 0))

    def at_lift(self, theta: float) -> "DirectedGerm":
        """Re-express at the branch-0 direction reached by the lift ``theta``.

        ``theta`` must differ from the current lift by a multiple of ``2 pi``
        plus the intended rotation; coefficients follow the continuation.
        """
        k = math.floor(theta / TWO_PI)
        angle = theta - TWO_PI * k
        if angle >= TWO_PI:
            angle -= TWO_PI
            k += 1
        shift = k - self.dir.branch
        return DirectedGerm(monodromy(self.germ, shift), Direction(self.base, angle if angle > 0 else 0.0, 0))

    def rotated(self, delta: float) -> "DirectedGerm":
        return self.at_lift(self.dir.lift + delta)


# --------------------------------------------------------------------------
# ring operations


def _check_base(f: PuiseuxGerm, g: PuiseuxGerm):
    if f.base != g.base:
        raise MismatchedBasePoint(f"{f.base} != {g.base}")


def scale(f: PuiseuxGerm, c) -> PuiseuxGerm:
    c = complex(c)
    if c == 0:
        return PuiseuxGerm(f.base, {}, f.known_order, f.ramification)
    return PuiseuxGerm._trusted(f.base, tuple((m, c * v) for m, v in f.terms), f.known_order, f.ramification)


def add(f: PuiseuxGerm, g: PuiseuxGerm) -> PuiseuxGerm:
    """Termwise sum; a coefficient that cancels to within ``EPS_ZERO`` of
    its summands is dropped."""
    _check_base(f, g)
    tau = min(f.known_order, g.known_order)
    a, b = f.as_dict(), g.as_dict()
    out = {}
    for mu in set(a) | set(b):
        x, y = a.get(mu, 0j), b.get(mu, 0j)
        s = x + y
        if abs(s) <= EPS_ZERO * max(abs(x), abs(y)):
            continue
        out[mu] = s
    return PuiseuxGerm(f.base, out, tau, _lcm(f.ramification, g.ramification))


def _low(f: PuiseuxGerm):
    """Lowest coordinate-scale exponent known to matter (``-pole order``)."""
    if f.terms:
        return -f.terms[0][0]
    return f.known_order


def _dense(f: PuiseuxGerm, P: int):
    """Coordinate-scale lattice array: index ``k - k0`` holds the coefficient
    of ``z_a**(k/P)``."""
    ks = [int(-m * P) for m, _ in f.terms]
    k0, k1 = min(ks), max(ks)
    arr = np.zeros(k1 - k0 + 1, dtype=np.complex128)
    for (m, c), k in zip(f.terms, ks):
        arr[k - k0] = c
    return k0, arr


def mul(f: PuiseuxGerm, g: PuiseuxGerm) -> PuiseuxGerm:
    """Truncated Cauchy product; ``known_order = min(tau_f - lam_g, tau_g - lam_f)``."""
    _check_base(f, g)
    tau = min(f.known_order + _low(g), g.known_order + _low(f))
    P = _lcm(f.ramification, g.ramification)
    if not f.terms or not g.terms:
        return PuiseuxGerm(f.base, {}, tau, P)
    kf, af = _dense(f, P)
    kg, ag = _dense(g, P)
    k0 = kf + kg
    n = len(af) + len(ag) - 1
    if tau != INF:
        n = min(n, math.ceil(tau * P) - k0)
    if n <= 0:
        return PuiseuxGerm(f.base, {}, tau, P)
    prod = kernels.mul_trunc(af, ag, n)
    size = kernels.mul_trunc(np.abs(af), np.abs(ag), n).real
    out = {}
    for i in range(n):
        c = prod[i]
        if c != 0 and abs(c) > EPS_ZERO * size[i]:
            out[Fraction(-(k0 + i), P)] = complex(c)
    return PuiseuxGerm(f.base, out, tau, P)


def derive(f: PuiseuxGerm) -> PuiseuxGerm:
    """Derivative with respect to the global coordinate ``z``."""
    if f.base.is_infinity:
        # c z^mu -> mu c z^(mu-1); O(z^-tau) -> O(z^-(tau+1))
        terms = {m - 1: m * c for m, c in f.terms if m != 0}
        tau = f.known_order + 1
    else:
        # c z_a^-mu -> -mu c z_a^(-mu-1)
        terms = {m + 1: -m * c for m, c in f.terms if m != 0}
        tau = f.known_order - 1
    return PuiseuxGerm(f.base, terms, tau, f.ramification)


def pole_order(f: PuiseuxGerm):
    """Largest stored exponent, ``-INF`` for a zero germ known past order 0."""
    if f.terms:
        return f.terms[0][0]
    if f.known_order > 0:
        return -INF
    raise IndeterminateOrder("no stored terms and known_order <= 0")


def is_bounded(f: PuiseuxGerm) -> bool:
    """Whether ``pole_order(f) <= 0``; decidable even when the exact order is not."""
    if f.terms and f.terms[0][0] > 0:
        return False
    if f.known_order >= 0:
        return True
    raise TruncationInsufficient("boundedness not determined by stored terms")


def _side(base: BasePoint) -> int:
    """Phase sign of a pole-scale term: ``-1`` at finite points, ``+1`` at infinity."""
    return 1 if base.is_infinity else -1


def sigma(f: PuiseuxGerm, dir: Direction) -> complex:
    """Leading coefficient, re-expressed for branch 0 at ``dir.angle``."""
    _check_dir(f, dir)
    lam = pole_order(f)
    if lam == -INF:
        raise ZeroGerm("sigma of the zero germ")
    c = f.terms[0][1]
    return c * turn(_side(f.base) * lam * dir.branch)


def monodromy(f: PuiseuxGerm, times: int = 1) -> PuiseuxGerm:
    """Continuation ``Theta -> Theta + 2 pi times``, expressed at the old determination."""
    if times == 0 or not f.terms:
        return f
    s = _side(f.base)
    terms = tuple((m, c * turn(s * m * times)) for m, c in f.terms)
    return PuiseuxGerm._trusted(f.base, terms, f.known_order, f.ramification)


def orbit_size(f: PuiseuxGerm) -> int:
    """Smallest ``j >= 1`` with ``monodromy^j(f)`` in the class of ``f``."""
    polar = [(m, c) for m, c in f.terms if m > 0]
    j = 1
    while True:
        if all((m * j).denominator == 1 for m, _ in polar):
            return j
        j += 1


def _check_dir(f: PuiseuxGerm, dir: Direction):
    if dir.base != f.base:
        raise MismatchedBasePoint("direction and germ at different points")


def leading_real_part(c: complex, lam, base: BasePoint, theta: float) -> float:
    """``Re`` of the leading term ``c * coord**(-lam)`` on the unit circle at lift ``theta``."""
    return (c * cmath.exp(1j * _side(base) * float(lam) * theta)).real


def _float_exponents(g: PuiseuxGerm) -> tuple[float, ...]:
    # exact for the small denominators in use; merging on floats avoids Fraction arithmetic
    try:
        return g._fexp
    except AttributeError:
        fexp = tuple(float(m) for m, _ in g.terms)
        object.__setattr__(g, "_fexp", fexp)
        return fexp


def _leading_difference(f: PuiseuxGerm, h: PuiseuxGerm):
    """Leading polar term ``(lam, c)`` of ``h - f``, or ``None`` when bounded.

    Applies the cancellation rule of :func:`add` without building the sum.
    """
    _check_base(f, h)
    a, b = f.terms, h.terms
    fa, fb = _float_exponents(f), _float_exponents(h)
    la, lb = len(a), len(b)
    i = j = 0
    while True:
        ma = fa[i] if i < la else -math.inf
        mb = fb[j] if j < lb else -math.inf
        top = ma if ma >= mb else mb
        if top <= 0:
            break
        if ma == top:
            mu, x = a[i]
            i += 1
        else:
            x = 0j
        if mb == top:
            mu, y = b[j]
            j += 1
        else:
            y = 0j
        c = y - x
        if abs(c) > EPS_ZERO * max(abs(x), abs(y)):
            return mu, c
    if min(f.known_order, h.known_order) >= 0:
        return None
    raise TruncationInsufficient("boundedness not determined by stored terms")


def compare_at(f: PuiseuxGerm, h: PuiseuxGerm, dir: Direction) -> Comparison:
    """Position of ``h`` relative to ``f`` at ``dir`` (``STRICTLY_BELOW`` means h < f)."""
    _check_dir(f, dir)
    lead = _leading_difference(f, h)
    if lead is None:
        return Comparison.EQUIVALENT
    lam, c = lead
    r = leading_real_part(c, lam, f.base, dir.lift)
    if abs(r) <= EPS_ZERO * abs(c):
        return Comparison.INCOMPARABLE
    return Comparison.STRICTLY_BELOW if r < 0 else Comparison.STRICTLY_ABOVE


def same_class(f: PuiseuxGerm, h: PuiseuxGerm) -> bool:
    return _leading_difference(f, h) is None


def stokes_lifts(d: PuiseuxGerm, p: int) -> list[float]:
    """Lifted angles in ``[0, 2 pi p)`` where the leading term of ``d`` has zero real part."""
    if is_bounded(d):
        return []
    lam, c = d.terms[0]
    return leading_zero_lifts(lam, c, d.base, p)


def leading_zero_lifts(lam, c: complex, base: BasePoint, p: int) -> list[float]:
    """Lifts in ``[0, 2 pi p)`` where ``Re`` of ``c * coord**(-lam)`` vanishes."""
    lamf = float(lam)
    spacing = math.pi / lamf
    if base.is_infinity:
        first = (math.pi / 2 - cmath.phase(c)) / lamf
    else:
        first = (cmath.phase(c) - math.pi / 2) / lamf
    first = math.fmod(first, spacing)
    if first < 0:
        first += spacing
    if (2 * p * as_fraction(lam)).denominator == 1:
        count = int(2 * p * lam)
    else:
        count = math.ceil((TWO_PI * p - first) / spacing)
    return [first + j * spacing for j in range(count)]


def stokes_directions(f: PuiseuxGerm, h: PuiseuxGerm) -> list[Direction]:
    """Stokes directions of the pair on the ``p``-fold cover, sorted by lift."""
    _check_base(f, h)
    d = h - f
    p = _lcm(f.ramification, h.ramification)
    return [Direction.from_lift(f.base, th, p) for th in stokes_lifts(d, p)]


# --------------------------------------------------------------------------
# evaluation


def evaluate_polar(f: PuiseuxGerm, radius: float, theta: float) -> complex:
    """Value at ``|coord| = radius`` with lifted argument ``theta``.

    The coordinate is ``z_a`` at a finite point and ``z`` at infinity.
    """
    if not f.terms:
        return 0j
    logr = math.log(radius)
    s = _side(f.base)
    total = 0j
    for m, c in f.terms:
        mf = float(m)
        total += c * cmath.exp(s * mf * complex(logr, theta))
    return total


def evaluate(f: PuiseuxGerm, z: complex, dir: Direction, radius: float | None = None) -> complex:
    """Value of ``f`` at the global point ``z`` in a sector around ``dir``."""
    _check_dir(f, dir)
    if f.base.is_infinity:
        coord = complex(z)
    else:
        coord = complex(z) - f.base.value
    r = abs(coord)
    if r == 0:
        raise OutOfSector("evaluation at the base point")
    if radius is not None:
        if f.base.is_infinity and r < radius:
            raise OutOfSector(f"|z| = {r} below the radius bound {radius}")
        if not f.base.is_infinity and r > radius:
            raise OutOfSector(f"|z_a| = {r} above the radius bound {radius}")
    theta = dir.lift + wrap_angle(cmath.phase(coord) - dir.lift)
    lam = pole_order(f) if f.terms else Fraction(0)
    half = math.pi / (2 * max(1.0, float(lam)))
    if abs(theta - dir.lift) > half + 1e-12:
        raise OutOfSector(f"arg {theta} outside the sector of half-width {half} at {dir.lift}")
    return evaluate_polar(f, r, theta)


# --------------------------------------------------------------------------
# powers and composition


def power(f: PuiseuxGerm, alpha, dir: Direction, arg_lift: float, order=None) -> PuiseuxGerm:
    """``f**alpha`` with the determination fixed by ``arg f ~ arg_lift`` along ``dir``.

    ``arg_lift`` is the continuous argument of the values of ``f`` on the
    sector of ``dir``. Exact inputs with a non-polynomial result need an
    ``order`` (coordinate scale) at which to truncate.
    """
    _check_dir(f, dir)
    alpha = as_fraction(alpha)
    lam, d = f.leading()
    s = _side(f.base)
    coord_arg = s * float(lam) * dir.lift
    a_d = arg_lift - coord_arg
    if abs(wrap_angle(a_d - cmath.phase(d))) > 1e-6:
        raise BranchMismatch(f"arg lift {arg_lift} incompatible with leading coefficient {d}")
    lead = abs(d) ** float(alpha) * cmath.exp(1j * float(alpha) * a_d)
    P = f.ramification
    top = alpha * lam
    limits = []
    if not f.is_exact:
        limits.append(f.known_order + lam - top)
    if order is not None:
        limits.append(as_fraction(order))
    tau = min(limits) if limits else INF
    rest = f.terms[1:]
    if not rest and f.is_exact:
        return PuiseuxGerm(f.base, {top: lead}, tau, _lcm(P, top.denominator))
    if tau == INF:
        raise TruncationInsufficient("power of an exact germ needs a truncation order")
    # f = d y^(-lam) (1 + eps), eps in powers s = y^(1/P)
    n = max(0, math.ceil((tau + top) * P))
    eps = np.zeros(max(n, 1), dtype=np.complex128)
    for m, c in rest:
        k = int((lam - m) * P)
        if k < n:
            eps[k] = c / d
    eps[0] = 1.0
    ser = kernels.pow_unit(eps, float(alpha), n)
    out = {top - Fraction(k, P): lead * ser[k] for k in range(n) if ser[k] != 0}
    return PuiseuxGerm(f.base, out, tau, _lcm(P, top.denominator))


def compose(f: PuiseuxGerm, src: Direction, psi: DirectedGerm, order) -> PuiseuxGerm:
    """``f(psi(w))`` as a germ at ``psi``'s base, truncated at ``order``.

    ``psi`` takes values approaching ``f``'s base point along ``src``;
    ``src.lift`` is the continuous argument of ``z_a`` (or ``z``) on those
    values.
    """
    _check_dir(f, src)
    if f.base.is_infinity:
        inner = psi.germ
        sign = 1
    else:
        inner = psi.germ - f.base.value
        sign = -1
    order = as_fraction(order)
    total = PuiseuxGerm(psi.base, {}, INF)
    for m, c in f.terms:
        term = power(inner, sign * m, psi.dir, src.lift, order)
        total = add(total, scale(term, c))
    if not f.is_exact:
        lam_in = pole_order(inner)
        total = total.truncated(sign * lam_in * f.known_order)
    return total.truncated(order)
