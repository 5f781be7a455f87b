"""Germ expressions, JSON data files, transform reports and Stokes diagrams.

Germ expressions use the variable ``x`` for the local coordinate: ``z - a``
at a finite point ``a`` and ``z`` itself at infinity, so ``x^(-1)`` is a
pole at a finite point and ``x^(3)`` grows at infinity::

    germ     := ['+'|'-'] term (('+'|'-') term)*
    term     := coeff ['*' power] | power ['*' coeff]
    power    := 'x' ['^' ('(' rational ')' | integer)]
    coeff    := real ['i'] | 'i' | '(' complex ')'
    complex  := ['+'|'-'] real ['/' integer] [('+'|'-') [real] 'i'] | ['+'|'-'] [real] 'i'
    rational := ['-'] integer ['/' integer]
"""
from __future__ import annotations

import csv
import io as _io
import json
import math
import re
from fractions import Fraction
from pathlib import Path

from .errors import GermSyntaxError, InvalidData
from .fourier import TransformReport
from .puiseux import INF, BasePoint, Direction, PuiseuxGerm
from .stokes import FactorOrbit, PointData, SingularityData, StokesStructure

__all__ = [
    "parse_germ",
    "print_germ",
    "parse_point",
    "point_to_json",
    "point_from_json",
    "data_to_json",
    "data_from_json",
    "load_data",
    "dump_data",
    "report_to_json",
    "stokes_svg",
    "stokes_csv",
    "emit_stokes_svg",
    "emit_stokes_csv",
    "FORMAT_VERSION",
]

FORMAT_VERSION = 1

_NUM = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_INT = re.compile(r"\d+")


class _Parser:
    def __init__(self, text: str):
        self.s = text
        self.i = 0

    # -- lexing helpers

    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.ws()
        return self.s[self.i] if self.i < len(self.s) else ""

    def eat(self, ch: str) -> bool:
        if self.peek() == ch:
            self.i += 1
            return True
        return False

    def expect(self, ch: str):
        if not self.eat(ch):
            got = self.peek() or "end of input"
            raise GermSyntaxError(f"expected {ch!r}, found {got!r}", self.i)

    def match(self, pattern: re.Pattern) -> str | None:
        self.ws()
        m = pattern.match(self.s, self.i)
        if not m:
            return None
        self.i = m.end()
        return m.group()

    # -- grammar

    def germ(self) -> list[tuple[Fraction, complex]]:
        terms = []
        terms.append(self.term(self.sign()))
        while True:
            if self.eat("+"):
                terms.append(self.term(1))
            elif self.eat("-"):
                terms.append(self.term(-1))
            else:
                break
        if self.peek():
            raise GermSyntaxError(f"unexpected {self.peek()!r}", self.i)
        return terms

    def sign(self) -> int:
        if self.eat("-"):
            return -1
        self.eat("+")
        return 1

    def term(self, sign: int) -> tuple[Fraction, complex]:
        if self.peek() == "x":
            e = self.power()
            c = 1 + 0j
            if self.eat("*"):
                c = self.coeff()
        else:
            c = self.coeff()
            e = Fraction(0)
            if self.eat("*"):
                if self.peek() != "x":
                    raise GermSyntaxError("expected a power of x after '*'", self.i)
                e = self.power()
        if self.peek() == "/":
            raise GermSyntaxError("division is only allowed inside coefficient parentheses", self.i)
        return e, sign * c

    def power(self) -> Fraction:
        self.expect("x")
        if not self.eat("^"):
            return Fraction(1)
        if self.eat("("):
            e = self.rational()
            self.expect(")")
            return e
        start = self.i
        neg = self.eat("-")
        digits = self.match(_INT)
        if digits is None:
            raise GermSyntaxError("expected an exponent", start)
        return Fraction(-int(digits) if neg else int(digits))

    def rational(self) -> Fraction:
        neg = self.eat("-")
        start = self.i
        num = self.match(_INT)
        if num is None:
            raise GermSyntaxError("expected an integer", start)
        den = 1
        if self.eat("/"):
            pos = self.i
            d = self.match(_INT)
            if d is None or int(d) == 0:
                raise GermSyntaxError("expected a positive denominator", pos)
            den = int(d)
        r = Fraction(int(num), den)
        return -r if neg else r

    def real(self) -> float | None:
        tok = self.match(_NUM)
        return None if tok is None else float(tok)

    def coeff(self) -> complex:
        start = self.i
        if self.eat("("):
            c = self.complex_body()
            self.expect(")")
            return c
        if self.eat("i"):
            return 1j
        v = self.real()
        if v is None:
            raise GermSyntaxError("expected a coefficient or x", start)
        if self.eat("i"):
            return complex(0, v)
        return complex(v)

    def complex_body(self) -> complex:
        neg = self.sign() < 0
        start = self.i
        if self.eat("i"):
            return complex(0, -1 if neg else 1)
        v = self.real()
        if v is None:
            raise GermSyntaxError("expected a number", start)
        if self.eat("i"):
            return complex(0, -v if neg else v)
        if self.eat("/"):
            pos = self.i
            d = self.real()
            if d is None or d == 0:
                raise GermSyntaxError("expected a nonzero denominator", pos)
            v = v / d
        re_part = -v if neg else v
        if self.peek() and self.peek() in "+-":
            s = 1 if self.s[self.i] == "+" else -1
            self.i += 1
            pos = self.i
            if self.eat("i"):
                return complex(re_part, s)
            im = self.real()
            if im is None:
                raise GermSyntaxError("expected an imaginary part", pos)
            self.expect("i")
            return complex(re_part, s * im)
        return complex(re_part)


def parse_germ(expr: str, base: BasePoint, ramification: int | None = None) -> PuiseuxGerm:
    """Parse a germ expression at ``base``; the result is exact."""
    if not expr.strip():
        raise GermSyntaxError("empty expression", 0)
    terms = _Parser(expr).germ()
    side = 1 if base.is_infinity else -1
    acc: dict[Fraction, complex] = {}
    for e, c in terms:
        mu = side * e
        acc[mu] = acc.get(mu, 0j) + c
    return PuiseuxGerm(base, acc, INF, ramification)


def _num(v: float) -> str:
    return repr(float(v) + 0.0)


def _coeff_text(c: complex) -> str:
    re_, im = float(c.real) + 0.0, float(c.imag) + 0.0
    if im == 0:
        return f"({_num(re_)})"
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"({_num(re_)}{sign}{_num(abs(im))}i)"


def print_germ(g: PuiseuxGerm) -> str:
    """Canonical expression: one ``(coeff)*x^(e)`` per term, largest growth first."""
    if not g.terms:
        return "(0.0)"
    side = 1 if g.base.is_infinity else -1
    parts = []
    for mu, c in g.terms:
        e = side * mu
        if e == 0:
            parts.append(_coeff_text(c))
        else:
            parts.append(f"{_coeff_text(c)}*x^({e})")
    return " + ".join(parts)


# --------------------------------------------------------------------------
# points


def parse_point(text: str) -> BasePoint:
    """``inf``/``infinity`` or a complex literal such as ``2``, ``1-3i``, ``(1+2i)``."""
    t = text.strip().lower()
    if t in ("inf", "infinity", "oo"):
        return BasePoint.infinity()
    p = _Parser(t)
    if p.peek() == "(":
        c = p.coeff()
    else:
        c = p.complex_body()
    if p.peek():
        raise GermSyntaxError(f"unexpected {p.peek()!r} in point", p.i)
    return BasePoint.finite(c)


def point_to_json(b: BasePoint) -> dict:
    if b.is_infinity:
        return {"type": "infinity"}
    return {"type": "finite", "re": float(b.value.real) + 0.0, "im": float(b.value.imag) + 0.0}


def point_from_json(obj) -> BasePoint:
    if not isinstance(obj, dict) or "type" not in obj:
        raise InvalidData(f"bad point {obj!r}")
    if obj["type"] == "infinity":
        return BasePoint.infinity()
    if obj["type"] == "finite":
        try:
            return BasePoint.finite(complex(float(obj["re"]), float(obj.get("im", 0.0))))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidData(f"bad finite point {obj!r}") from exc
    raise InvalidData(f"unknown point type {obj['type']!r}")


# --------------------------------------------------------------------------
# data files


def data_to_json(data: SingularityData) -> dict:
    return {
        "version": FORMAT_VERSION,
        "line": data.line,
        "points": [
            {
                "point": point_to_json(pd.point),
                "factors": [
                    {
                        "germ": print_germ(o.representative),
                        "ramification": o.representative.ramification,
                        "multiplicity": o.multiplicity,
                    }
                    for o in pd.factors
                ],
            }
            for pd in data.points
        ],
    }


def data_from_json(obj) -> SingularityData:
    if not isinstance(obj, dict):
        raise InvalidData("data file must be a JSON object")
    if obj.get("version") != FORMAT_VERSION:
        raise InvalidData(f"unsupported version {obj.get('version')!r}")
    points = []
    for entry in obj.get("points", []):
        base = point_from_json(entry.get("point"))
        orbits = []
        for fac in entry.get("factors", []):
            try:
                expr, ram = fac["germ"], int(fac.get("ramification", 1))
                mult = int(fac.get("multiplicity", 1))
            except (KeyError, TypeError, ValueError) as exc:
                raise InvalidData(f"bad factor {fac!r}") from exc
            germ = parse_germ(expr, base, ram)
            orbits.append(FactorOrbit(germ, mult))
        points.append(PointData(base, tuple(orbits)))
    return SingularityData(obj.get("line", "V"), tuple(points))


def load_data(path) -> SingularityData:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GermSyntaxError(f"invalid JSON: {exc.msg}", exc.pos) from exc
    return data_from_json(obj)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def dump_data(data: SingularityData, path=None) -> str:
    text = _dumps(data_to_json(data))
    if path is not None:
        Path(path).write_text(text)
    return text


# --------------------------------------------------------------------------
# reports


def _dir_json(d: Direction) -> dict:
    return {"angle": d.angle, "degrees": math.degrees(d.angle), "branch": d.branch}


def _factor_json(b: BasePoint, g: PuiseuxGerm, mult: int) -> dict:
    return {
        "point": point_to_json(b),
        "germ": print_germ(g),
        "ramification": g.ramification,
        "multiplicity": mult,
    }


def report_to_json(report: TransformReport) -> dict:
    entries = []
    for e in report.entries:
        entries.append(
            {
                "source": _factor_json(e.source_point, e.source, e.multiplicity),
                "case": e.case.to_json(),
                "beta": [e.beta.real + 0.0, e.beta.imag + 0.0],
                "eta": _dir_json(e.eta),
                "target": _factor_json(e.target_point, e.target, e.multiplicity),
                "output_pole_order": str(e.case.output_pole_order),
                "residual": e.residual,
                "merged": e.merged,
            }
        )
    skipped = [
        {"source": _factor_json(s.source_point, s.source, s.multiplicity), "reason": s.reason}
        for s in report.skipped
    ]
    return {"entries": entries, "skipped": skipped, "residuals": report.residuals}


# --------------------------------------------------------------------------
# Stokes diagrams


def _fmt(v: float) -> str:
    return f"{v:.4f}"


def stokes_svg(s: StokesStructure, size: int = 480) -> str:
    """Circle of directions with Stokes rays and per-sector dominance labels."""
    c = size / 2
    R = size * 0.3
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<title>Stokes directions at {s.point}</title>',
        f'<circle cx="{_fmt(c)}" cy="{_fmt(c)}" r="{_fmt(R)}" fill="none" stroke="black"/>',
    ]
    for ray in s.rays:
        a = ray.direction.angle
        x, y = c + R * math.cos(a), c - R * math.sin(a)
        out.append(
            f'<line class="ray" data-angle="{math.degrees(a):.6f}" x1="{_fmt(c)}" y1="{_fmt(c)}" '
            f'x2="{_fmt(x)}" y2="{_fmt(y)}" stroke="red"/>'
        )
    for sec in s.sectors:
        a = sec.midpoint.angle
        x, y = c + 1.15 * R * math.cos(a), c - 1.15 * R * math.sin(a)
        anchor = "start" if math.cos(a) > 0.1 else ("end" if math.cos(a) < -0.1 else "middle")
        order = " > ".join(print_germ(sec.ranks[i].germ) for i in sec.dominance_order())
        out.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-size="9" text-anchor="{anchor}">'
            f"{_escape(order)}</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(t: str) -> str:
    return t.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def stokes_csv(s: StokesStructure) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["ray_angle", "germ_pair"])
    for ray in s.rays:
        f, h = ray.pair
        w.writerow([f"{math.degrees(ray.direction.angle):.10f}", f"{print_germ(f)} | {print_germ(h)}"])
    return buf.getvalue()


def emit_stokes_svg(s: StokesStructure, path) -> None:
    Path(path).write_text(stokes_svg(s))


def emit_stokes_csv(s: StokesStructure, path) -> None:
    Path(path).write_text(stokes_csv(s))
