"""Stationary phase: transform singularity data orbit by orbit."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .errors import InvalidData
from .legendre import (
    DEFAULT_PRECISION,
    Admissibility,
    LegendrePair,
    classify,
    inverse_legendre,
    legendre_transform,
)
from .puiseux import (
    BasePoint,
    DirectedGerm,
    Direction,
    PuiseuxGerm,
)
from .stokes import (
    FactorOrbit,
    PointData,
    SingularityData,
    gr_rank,
    pair_rays,
    point_key,
    ray_angles,
    smallest_midpoint,
    validate,
)

__all__ = [
    "Entry",
    "Skipped",
    "TransformReport",
    "fourier_transform",
    "inverse_fourier_transform",
    "check_stationary_phase",
    "StationaryPhaseCheck",
    "GENERIC_TOL",
    "GENERIC_SHIFT",
]

#: a target direction this close to an output Stokes ray counts as non-generic
GENERIC_TOL = 1e-6
#: rotation applied to a non-generic target direction
GENERIC_SHIFT = 1e-3


@dataclass(frozen=True)
class Entry:
    source_point: BasePoint
    source: PuiseuxGerm
    multiplicity: int
    case: Admissibility
    beta: complex
    eta: Direction
    target_point: BasePoint
    target: PuiseuxGerm
    residual: float
    merged: bool = False


@dataclass(frozen=True)
class Skipped:
    source_point: BasePoint
    source: PuiseuxGerm
    multiplicity: int
    reason: str  # "linear" or "bounded"


@dataclass
class TransformReport:
    entries: list[Entry] = field(default_factory=list)
    skipped: list[Skipped] = field(default_factory=list)

    @property
    def residuals(self) -> list[float]:
        return [e.residual for e in self.entries]

    @property
    def collisions(self) -> int:
        return sum(e.merged for e in self.entries)


def _order_key(o: FactorOrbit):
    rep = o.representative
    lead = rep.terms[0][0]
    coeffs = tuple((float(m), c.real, c.imag) for m, c in rep.terms)
    return (-lead, coeffs)


def _run(
    data: SingularityData,
    precision: int,
    need_line: str,
    out_line: str,
    step: Callable[[DirectedGerm, int], LegendrePair],
) -> tuple[SingularityData, TransformReport]:
    if data.line != need_line:
        raise InvalidData(f"expected data on {need_line}, got {data.line}")
    problems = validate(data)
    if problems:
        raise InvalidData("; ".join(str(v) for v in problems))
    report = TransformReport()
    grouped: dict[BasePoint, list[FactorOrbit]] = {}
    for pd in sorted(data.points, key=lambda d: point_key(d.point)):
        if not pd.factors:
            continue
        start = smallest_midpoint(pd)
        for orbit in sorted(pd.factors, key=_order_key):
            src = DirectedGerm(orbit.representative, start)
            adm = classify(src)
            if not adm.admissible:
                report.skipped.append(Skipped(pd.point, orbit.representative, orbit.multiplicity, adm.reason))
                continue
            q = int(adm.lam * orbit.representative.ramification)
            pair = step(src, max(precision, q + 2))
            rep = pair.target.germ.polar_part()
            tgt = pair.target.base
            merged = False
            bucket = grouped.setdefault(tgt, [])
            for k, other in enumerate(bucket):
                if other.contains_class(rep):
                    bucket[k] = FactorOrbit(other.representative, other.multiplicity + orbit.multiplicity)
                    merged = True
                    break
            if not merged:
                bucket.append(FactorOrbit(rep, orbit.multiplicity))
            report.entries.append(
                Entry(
                    pd.point,
                    orbit.representative,
                    orbit.multiplicity,
                    pair.case,
                    pair.beta,
                    pair.target.dir,
                    tgt,
                    rep,
                    pair.residual,
                    merged,
                )
            )
    points = [PointData(b, tuple(grouped[b])) for b in sorted(grouped, key=point_key)]
    return SingularityData(out_line, tuple(points)), report


def fourier_transform(
    data: SingularityData, precision: int = DEFAULT_PRECISION
) -> tuple[SingularityData, TransformReport]:
    """Exponential factors of the Fourier transform, with multiplicities.

    Each orbit is transformed at the smallest sector midpoint of its point;
    linear factors are listed in ``report.skipped``.
    """
    return _run(data, precision, "V", "V*", legendre_transform)


def inverse_fourier_transform(
    data: SingularityData, precision: int = DEFAULT_PRECISION
) -> tuple[SingularityData, TransformReport]:
    return _run(data, precision, "V*", "V", inverse_legendre)


@dataclass(frozen=True)
class StationaryPhaseCheck:
    lhs: int
    rhs: int
    eta: Direction
    target: PuiseuxGerm
    perturbed: bool

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def _generic_target(pair: LegendrePair, pd: PointData) -> tuple[DirectedGerm, bool]:
    """Rotate the target off any output Stokes ray it sits on."""
    target = pair.target
    g = target.germ.polar_part()
    rays = list(ray_angles(pd))
    for o in pd.factors:
        for h in o.conjugates():
            rays.extend(pair_rays(h, g))
    eta = target.dir.angle
    for r in rays:
        if abs(math.remainder(eta - r, 2 * math.pi)) < GENERIC_TOL:
            return target.rotated(GENERIC_SHIFT), True
    return target, False


def check_stationary_phase(
    data: SingularityData,
    f_query: DirectedGerm,
    precision: int = DEFAULT_PRECISION,
    transformed: SingularityData | None = None,
) -> StationaryPhaseCheck:
    """Compare the multiplicity of ``L(f_query)`` downstream with that of ``f_query``.

    ``transformed`` may carry a precomputed ``fourier_transform(data)[0]``
    when many queries run against the same data.
    """
    rhs = gr_rank(data.at(f_query.base), f_query.dir, f_query.germ)
    query = DirectedGerm(f_query.germ.polar_part(), f_query.dir)
    adm = classify(query)
    q = int(adm.lam * query.germ.ramification) if adm.admissible else 0
    pair = legendre_transform(query, max(precision, q + 2))
    out = transformed if transformed is not None else fourier_transform(data, precision)[0]
    pd = out.at(pair.target.base)
    target, moved = _generic_target(pair, pd)
    lhs = gr_rank(pd, target.dir, target.germ)
    return StationaryPhaseCheck(lhs, rhs, target.dir, target.germ, moved)
