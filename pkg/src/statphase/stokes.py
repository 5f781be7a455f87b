"""Exponential factors with multiplicities and their Stokes filtrations.

Factors at a point are stored as monodromy orbits. An orbit keeps one exact
representative (its polar part, coefficients at branch 0) and a
multiplicity. Instantiating at a direction produces every conjugate,
expressed at the branch of that direction.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InvalidData, MismatchedBasePoint, NonGenericDirection
from .puiseux import (
    TWO_PI,
    BasePoint,
    Comparison,
    Direction,
    PuiseuxGerm,
    _lcm,
    _leading_difference,
    compare_at,
    is_bounded,
    monodromy,
    orbit_size,
    pole_order,
    same_class,
    leading_zero_lifts,
)

__all__ = [
    "FactorOrbit",
    "PointData",
    "SingularityData",
    "Ray",
    "Sector",
    "StokesStructure",
    "Violation",
    "validate",
    "instantiate",
    "pair_rays",
    "stokes_structure",
    "gr_rank",
    "filtration_rank",
    "point_key",
    "ray_angles",
    "smallest_midpoint",
]

@dataclass(frozen=True)
class FactorOrbit:
    """A monodromy orbit of exponential factors with a common multiplicity."""

    representative: PuiseuxGerm
    multiplicity: int = 1
    orbit_size: int = field(init=False)

    def __post_init__(self):
        rep = self.representative.polar_part()
        if not rep.terms:
            raise InvalidData("a factor must have positive pole order")
        if self.multiplicity < 1:
            raise InvalidData("multiplicity must be at least 1")
        object.__setattr__(self, "representative", rep)
        object.__setattr__(self, "orbit_size", orbit_size(rep))

    @property
    def base(self) -> BasePoint:
        return self.representative.base

    @functools.cached_property
    def _conjugates(self) -> tuple[PuiseuxGerm, ...]:
        return tuple(monodromy(self.representative, j) for j in range(self.orbit_size))

    def conjugates(self) -> list[PuiseuxGerm]:
        """``monodromy^j(representative)`` for ``j < orbit_size``, at branch 0."""
        return list(self._conjugates)

    def contains_class(self, f: PuiseuxGerm) -> bool:
        return any(same_class(h, f) for h in self.conjugates())


@dataclass(frozen=True)
class PointData:
    point: BasePoint
    factors: tuple[FactorOrbit, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for o in self.factors:
            if o.base != self.point:
                raise MismatchedBasePoint(f"factor at {o.base} filed under {self.point}")

    @property
    def ramification(self) -> int:
        p = 1
        for o in self.factors:
            p = _lcm(p, o.representative.ramification)
        return p

    @property
    def total_rank(self) -> int:
        return sum(o.multiplicity * o.orbit_size for o in self.factors)


@dataclass(frozen=True)
class SingularityData:
    line: str = "V"
    points: tuple[PointData, ...] = ()

    def __post_init__(self):
        if self.line not in ("V", "V*"):
            raise InvalidData(f"line must be 'V' or 'V*', got {self.line!r}")
        object.__setattr__(self, "points", tuple(self.points))

    def at(self, point: BasePoint) -> PointData:
        """Data at ``point`` (empty if the point carries no factors)."""
        for pd in self.points:
            if pd.point == point:
                return pd
        return PointData(point, ())


def point_key(b: BasePoint):
    """Sort key: finite points by real then imaginary part, infinity last."""
    if b.is_infinity:
        return (1, 0.0, 0.0)
    return (0, b.value.real, b.value.imag)


@dataclass(frozen=True)
class Violation:
    kind: str  # NotWellSeparated | BoundedFactor | DuplicatePoint | OrbitNotClosed
    point: BasePoint | None
    detail: str

    def __str__(self):
        return f"{self.kind} at {self.point}: {self.detail}"


# --------------------------------------------------------------------------
# instantiation


def instantiate(pd: PointData, dir: Direction) -> list[tuple[PuiseuxGerm, int]]:
    """All conjugates of all orbits, expressed at ``dir``'s branch."""
    if dir.base != pd.point:
        raise MismatchedBasePoint("direction and data at different points")
    return list(_instantiated(pd, dir.branch))


@functools.lru_cache(maxsize=1024)
def _instantiated(pd: PointData, branch: int) -> tuple[tuple[PuiseuxGerm, int], ...]:
    return tuple((monodromy(h, -branch), o.multiplicity) for o in pd.factors for h in o.conjugates())


def pair_rays(f: PuiseuxGerm, h: PuiseuxGerm) -> list[float]:
    """Angles in ``[0, 2 pi)`` where ``f`` and ``h`` (branch 0) are incomparable."""
    lead = _leading_difference(f, h)
    if lead is None:
        return []
    lam, c = lead
    p = _lcm(f.ramification, h.ramification)
    return [t for t in leading_zero_lifts(lam, c, f.base, p) if t < TWO_PI]


def _midpoints(angles: Sequence[float]) -> list[float]:
    if not angles:
        return [0.0]
    mids = []
    for j, a in enumerate(angles):
        b = angles[j + 1] if j + 1 < len(angles) else angles[0] + TWO_PI
        mids.append(math.fmod((a + b) / 2, TWO_PI))
    return mids


def _distinct_rays(raw: list[float], tol: float = 1e-9) -> list[float]:
    raw = sorted(raw)
    out: list[float] = []
    for t in raw:
        if not out or t - out[-1] > tol:
            out.append(t)
    if len(out) > 1 and out[0] + TWO_PI - out[-1] <= tol:
        out.pop()
    return out


# --------------------------------------------------------------------------
# validation


def validate(data: SingularityData) -> list[Violation]:
    """Violations of the point-data invariants; empty means valid."""
    out: list[Violation] = []
    seen: set[BasePoint] = set()
    for pd in data.points:
        if pd.point in seen:
            out.append(Violation("DuplicatePoint", pd.point, "point listed twice"))
        seen.add(pd.point)
        for o in pd.factors:
            back = monodromy(o.representative, o.orbit_size)
            if not same_class(back, o.representative):
                out.append(Violation("OrbitNotClosed", pd.point, repr(o.representative)))
        # monodromy is a ring automorphism, so classes and boundedness look the
        # same at every branch and one instantiation covers all probe directions
        germs = instantiate(pd, Direction(pd.point, 0.0, 0))
        for i, (g, _) in enumerate(germs):
            if is_bounded(g):
                out.append(Violation("BoundedFactor", pd.point, repr(g)))
            for h, _ in germs[i + 1 :]:
                if same_class(g, h):
                    out.append(Violation("NotWellSeparated", pd.point, f"{g!r} and {h!r} share a class"))
    return out


# --------------------------------------------------------------------------
# Stokes structure


@dataclass(frozen=True)
class Ray:
    direction: Direction
    pair: tuple[PuiseuxGerm, PuiseuxGerm]


@dataclass(frozen=True)
class RankRow:
    germ: PuiseuxGerm
    multiplicity: int
    f_le: int
    f_lt: int

    @property
    def gr(self) -> int:
        return self.f_le - self.f_lt


@dataclass(frozen=True)
class Sector:
    start: float
    end: float  # may exceed 2 pi for the wrapping sector
    midpoint: Direction
    below: tuple[tuple[int, int], ...]  # (i, j): factor i strictly below factor j
    ranks: tuple[RankRow, ...]

    def dominance_order(self) -> list[int]:
        """Factor indices sorted from dominant to recessive."""
        return sorted(range(len(self.ranks)), key=lambda i: -self.ranks[i].f_lt)


@dataclass(frozen=True)
class StokesStructure:
    point: BasePoint
    rays: tuple[Ray, ...]
    sectors: tuple[Sector, ...]

    @property
    def angles(self) -> list[float]:
        return [r.direction.angle for r in self.rays]

    def sector_at(self, angle: float) -> Sector:
        for s in self.sectors:
            a = angle if angle >= s.start else angle + TWO_PI
            if s.start < a < s.end:
                return s
        return self.sectors[0]


def _ranks(germs: list[tuple[PuiseuxGerm, int]], dir: Direction):
    below = []
    rows = []
    for i, (f, m) in enumerate(germs):
        le = lt = 0
        for j, (h, mh) in enumerate(germs):
            c = compare_at(f, h, dir)
            if c is Comparison.INCOMPARABLE:
                raise NonGenericDirection(f"angle {dir.lift} is a Stokes direction")
            if c is Comparison.STRICTLY_BELOW:
                lt += mh
                le += mh
                below.append((j, i))
            elif c is Comparison.EQUIVALENT:
                le += mh
        rows.append(RankRow(f, m, le, lt))
    return tuple(sorted(below)), tuple(rows)


def stokes_structure(pd: PointData) -> StokesStructure:
    """Stokes rays on ``[0, 2 pi)`` and the per-sector dominance data."""
    germs = instantiate(pd, Direction(pd.point, 0.0, 0))
    raw: list[tuple[float, int, int]] = []
    for i in range(len(germs)):
        for j in range(i + 1, len(germs)):
            for t in pair_rays(germs[i][0], germs[j][0]):
                raw.append((t, i, j))
    raw.sort()
    rays: list[Ray] = []
    for t, i, j in raw:
        if rays and abs(t - rays[-1].direction.angle) <= 1e-9:
            continue
        rays.append(Ray(Direction(pd.point, t, 0), (germs[i][0], germs[j][0])))
    if len(rays) > 1 and rays[0].direction.angle + TWO_PI - rays[-1].direction.angle <= 1e-9:
        rays.pop()
    angles = [r.direction.angle for r in rays]
    sectors = []
    if not angles:
        bounds = [(0.0, TWO_PI)]
    else:
        bounds = [
            (a, angles[k + 1] if k + 1 < len(angles) else angles[0] + TWO_PI)
            for k, a in enumerate(angles)
        ]
    for a, b in bounds:
        mid = Direction(pd.point, math.fmod((a + b) / 2, TWO_PI) if angles else 0.0, 0)
        inst = instantiate(pd, mid)
        below, rows = _ranks(inst, mid)
        sectors.append(Sector(a, b, mid, below, rows))
    return StokesStructure(pd.point, tuple(rays), tuple(sectors))


@functools.lru_cache(maxsize=512)
def ray_angles(pd: PointData) -> tuple[float, ...]:
    """Distinct Stokes angles of all instantiated pairs, on ``[0, 2 pi)``."""
    germs = [g for g, _ in instantiate(pd, Direction(pd.point, 0.0, 0))]
    raw = []
    for i in range(len(germs)):
        for j in range(i + 1, len(germs)):
            raw.extend(pair_rays(germs[i], germs[j]))
    return tuple(_distinct_rays(raw))


def smallest_midpoint(pd: PointData) -> Direction:
    """The sector midpoint with the smallest angle."""
    return Direction(pd.point, min(_midpoints(ray_angles(pd))), 0)


# --------------------------------------------------------------------------
# rank queries


def gr_rank(pd: PointData, dir: Direction, f: PuiseuxGerm) -> int:
    """Multiplicity of the factor in the class of ``f`` at ``dir`` (0 if absent)."""
    if f.base != pd.point:
        raise MismatchedBasePoint("query germ and data at different points")
    for h, m in instantiate(pd, dir):
        if same_class(h, f):
            return m
    return 0


def filtration_rank(pd: PointData, dir: Direction, f: PuiseuxGerm, strict: bool = False) -> int:
    """Rank of the filtration step below ``f`` at a generic ``dir``."""
    if f.base != pd.point:
        raise MismatchedBasePoint("query germ and data at different points")
    total = 0
    for h, m in instantiate(pd, dir):
        c = compare_at(f, h, dir)
        if c is Comparison.INCOMPARABLE:
            raise NonGenericDirection(f"angle {dir.lift} is a Stokes direction for the query")
        if c is Comparison.STRICTLY_BELOW or (not strict and c is Comparison.EQUIVALENT):
            total += m
    return total
