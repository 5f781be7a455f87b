import json
import random
import re
from fractions import Fraction as F
from pathlib import Path

import pytest

from corpus import germ_corpus, random_dataset
from statphase.cli import main
from statphase.errors import DenominatorMismatch, GermSyntaxError, InvalidData
from statphase.io import (
    data_from_json,
    data_to_json,
    dump_data,
    load_data,
    parse_germ,
    parse_point,
    print_germ,
    stokes_csv,
    stokes_svg,
)
from statphase.puiseux import BasePoint, PuiseuxGerm
from statphase.stokes import FactorOrbit, PointData, SingularityData, stokes_structure

GOLDEN = Path(__file__).parent / "golden"
Z = BasePoint.finite(0)
I = BasePoint.infinity()


class TestParser:
    def test_rational_coefficient(self):
        g = parse_germ("(1/3)*x^(3)", I)
        assert g.as_dict() == {3: pytest.approx(1 / 3)}

    def test_power_then_coefficient(self):
        assert parse_germ("x^(3)*(1/3)", I).allclose(parse_germ("(1/3)*x^(3)", I), 0)

    def test_two_terms_at_zero(self):
        g = parse_germ("2*x^(-3/2) + (1+2i)*x^(-1)", Z, 2)
        assert g.as_dict() == {F(3, 2): 2, 1: 1 + 2j} and g.ramification == 2

    def test_division_of_power_rejected(self):
        with pytest.raises(GermSyntaxError) as err:
            parse_germ("x^(3)/3", I)
        assert err.value.position == 5  # index of the slash

    def test_denominator_mismatch(self):
        with pytest.raises(DenominatorMismatch):
            parse_germ("x^(-1/3)", Z, 2)

    @pytest.mark.parametrize(
        "text, expect",
        [
            ("i*x^2", {2: 1j}),
            ("-x", {1: -1}),
            ("3.5i*x^(1/2) - 2", {F(1, 2): 3.5j, 0: -2}),
            ("(-i)*x^(4/3) + x^(4/3)", {F(4, 3): 1 - 1j}),
            ("1e-3*x", {1: 1e-3}),
            ("(2-0.5i/1)*x", None),
        ],
    )
    def test_forms(self, text, expect):
        if expect is None:
            with pytest.raises(GermSyntaxError):
                parse_germ(text, I)
            return
        assert parse_germ(text, I).allclose(PuiseuxGerm(I, expect), 1e-15)

    @pytest.mark.parametrize("text", ["", "x^", "2*", "(1+2i", "x^(1/0)", "2 x", "*x", "x^(a)"])
    def test_syntax_errors(self, text):
        with pytest.raises(GermSyntaxError):
            parse_germ(text, I)

    def test_points(self):
        assert parse_point("inf") == I and parse_point("oo") == I
        assert parse_point("1-3i") == BasePoint.finite(1 - 3j)
        assert parse_point("(2)") == BasePoint.finite(2)


class TestRoundTrip:
    def test_print_parse_corpus(self):
        for f in germ_corpus(120, seed=7):
            g = f.germ
            back = parse_germ(print_germ(g), g.base, g.ramification)
            assert back.terms == g.terms

    def test_parse_print_normalizes(self):
        g = parse_germ("x^(3)*(1/3) + 2 - x^(3)*(1/3) + x", I)
        assert print_germ(g) == "(1.0)*x^(1) + (2.0)"
        assert print_germ(parse_germ(print_germ(g), I)) == print_germ(g)

    def test_zero_germ(self):
        assert print_germ(PuiseuxGerm.zero(I)) == "(0.0)"

    @pytest.mark.parametrize("seed", range(10))
    def test_datafile(self, seed):
        d = random_dataset(random.Random(seed))
        obj = json.loads(dump_data(d))
        assert data_from_json(obj) == d
        assert data_to_json(data_from_json(obj)) == obj

    def test_bad_version(self):
        with pytest.raises(InvalidData):
            data_from_json({"version": 9, "line": "V", "points": []})

    def test_bad_point(self):
        with pytest.raises(InvalidData):
            data_from_json({"version": 1, "line": "V", "points": [{"point": {"type": "moon"}, "factors": []}]})


class TestGolden:
    def test_data_file(self):
        d = load_data(GOLDEN / "airy.json")
        assert dump_data(d) == (GOLDEN / "airy.json").read_text()

    def test_transform(self, tmp_path):
        out, rep = tmp_path / "out.json", tmp_path / "report.json"
        assert main(["transform", str(GOLDEN / "airy.json"), "-o", str(out), "--report", str(rep)]) == 0
        assert out.read_text() == (GOLDEN / "airy_out.json").read_text()
        assert rep.read_text() == (GOLDEN / "airy_report.json").read_text()

    @pytest.mark.parametrize("suffix", ["svg", "csv"])
    def test_stokes(self, tmp_path, suffix):
        target = tmp_path / f"s.{suffix}"
        assert main(["stokes", str(GOLDEN / "airy_out.json"), "--point", "inf", "-o", str(target)]) == 0
        assert target.read_text() == (GOLDEN / f"airy_out.{suffix}").read_text()

    def test_svg_rays(self):
        s = stokes_structure(load_data(GOLDEN / "airy_out.json").at(I))
        svg = stokes_svg(s)
        angles = [float(a) for a in re.findall(r'data-angle="([\d.]+)"', svg)]
        assert angles == pytest.approx([60, 180, 300])

    def test_singleton_svg(self):
        s = stokes_structure(PointData(Z, (FactorOrbit(PuiseuxGerm(Z, {1: 1})),)))
        svg = stokes_svg(s)
        assert 'class="ray"' not in svg and svg.count("<text") == 1
        assert stokes_csv(s).strip() == "ray_angle,germ_pair"


class TestCli:
    def test_check_airy(self, capsys):
        rc = main(["check", str(GOLDEN / "airy.json"), "--germ", "x^(3)*(1/3)", "--dir", "180"])
        out = capsys.readouterr().out
        assert rc == 0 and "lhs=1 rhs=1" in out

    def test_check_absent(self, capsys):
        rc = main(["check", str(GOLDEN / "airy.json"), "--germ", "x^(2)", "--dir", "30"])
        assert rc == 0 and "lhs=0 rhs=0" in capsys.readouterr().out

    def test_legendre(self, capsys):
        rc = main(["legendre", "--germ", "x^(-1)", "--base", "0", "--dir", "0"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "target base: inf" in out and "eta: 180 deg" in out and "order: 1/2" in out

    def test_verify(self, tmp_path):
        rep = tmp_path / "v.json"
        assert main(["verify", str(GOLDEN / "airy.json"), "-o", str(rep)]) == 0
        assert json.loads(rep.read_text())["passed"] is True

    def test_inverse_transform(self, tmp_path):
        out = tmp_path / "back.json"
        assert main(["inverse-transform", str(GOLDEN / "airy_out.json"), "-o", str(out)]) == 0
        orbit = load_data(out).points[0].factors[0]
        assert orbit.contains_class(PuiseuxGerm(I, {3: 1 / 3}))

    def test_parse_error_exit(self, capsys):
        assert main(["legendre", "--germ", "x^(3)/3", "--base", "inf", "--dir", "0"]) == 4

    def test_bad_json_exit(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["transform", str(bad)]) == 4

    def test_invalid_exit(self, capsys):
        assert main(["legendre", "--germ", "x + 5", "--base", "inf", "--dir", "0"]) == 2
        assert main(["transform", str(GOLDEN / "airy_out.json")]) == 2

    def test_missing_file_exit(self, tmp_path):
        assert main(["transform", str(tmp_path / "none.json")]) == 2

    def test_deterministic(self, tmp_path):
        src = tmp_path / "in.json"
        dump_data(random_dataset(random.Random(11)), src)
        outs = []
        for k in range(2):
            o, r = tmp_path / f"o{k}.json", tmp_path / f"r{k}.json"
            assert main(["transform", str(src), "-o", str(o), "--report", str(r)]) == 0
            outs.append((o.read_bytes(), r.read_bytes()))
        assert outs[0] == outs[1]
