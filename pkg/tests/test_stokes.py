import math
from fractions import Fraction as F

import pytest

from statphase.errors import InvalidData, MismatchedBasePoint, NonGenericDirection
from statphase.puiseux import BasePoint, Direction, PuiseuxGerm, same_class
from statphase.stokes import (
    FactorOrbit,
    PointData,
    SingularityData,
    filtration_rank,
    gr_rank,
    instantiate,
    smallest_midpoint,
    stokes_structure,
    validate,
)

Z = BasePoint.finite(0)
I = BasePoint.infinity()
G_PLUS = PuiseuxGerm(I, {F(3, 2): 2 / 3})
G_MINUS = PuiseuxGerm(I, {F(3, 2): -2 / 3})
AIRY = PointData(I, (FactorOrbit(G_PLUS),))


def kinds(data):
    return [v.kind for v in validate(data)]


class TestValidate:
    def test_airy_valid(self):
        assert validate(SingularityData("V*", (AIRY,))) == []

    def test_same_class_twice(self):
        pd = PointData(Z, (FactorOrbit(PuiseuxGerm(Z, {1: 1})), FactorOrbit(PuiseuxGerm(Z, {1: 1, 0: 3}))))
        assert "NotWellSeparated" in kinds(SingularityData("V", (pd,)))

    def test_conjugate_listed_separately(self):
        pd = PointData(I, (FactorOrbit(G_PLUS), FactorOrbit(G_MINUS)))
        assert "NotWellSeparated" in kinds(SingularityData("V", (pd,)))

    def test_empty(self):
        assert validate(SingularityData()) == []

    def test_duplicate_point(self):
        pd = PointData(Z, (FactorOrbit(PuiseuxGerm(Z, {1: 1})),))
        assert "DuplicatePoint" in kinds(SingularityData("V", (pd, pd)))

    def test_orbit_rejects_bounded(self):
        with pytest.raises(InvalidData):
            FactorOrbit(PuiseuxGerm(Z, {0: 1}))

    def test_orbit_rejects_zero_multiplicity(self):
        with pytest.raises(InvalidData):
            FactorOrbit(PuiseuxGerm(Z, {1: 1}), 0)

    def test_factor_filed_under_wrong_point(self):
        with pytest.raises(MismatchedBasePoint):
            PointData(Z, (FactorOrbit(G_PLUS),))

    def test_bad_line(self):
        with pytest.raises(InvalidData):
            SingularityData("W", ())


class TestInstantiate:
    @pytest.mark.parametrize("angle, branch", [(0.0, 0), (2.0, 1), (5.0, 0)])
    def test_airy_pair(self, angle, branch):
        germs = instantiate(AIRY, Direction(I, angle, branch))
        assert len(germs) == 2 and all(m == 1 for _, m in germs)
        assert {round(g.coeff(F(3, 2)).real, 12) for g, _ in germs} == {round(2 / 3, 12), round(-2 / 3, 12)}

    def test_single_valued(self):
        pd = PointData(Z, (FactorOrbit(PuiseuxGerm(Z, {1: 1}), 3),))
        germs = instantiate(pd, Direction(Z, 1.0))
        assert len(germs) == 1 and germs[0][1] == 3

    def test_half_order_orbit(self):
        pd = PointData(Z, (FactorOrbit(PuiseuxGerm(Z, {F(1, 2): 1})),))
        germs = [g for g, _ in instantiate(pd, Direction(Z, 0.0))]
        assert len(germs) == 2
        assert germs[0].coeff(F(1, 2)) == pytest.approx(1)
        assert germs[1].coeff(F(1, 2)) == pytest.approx(-1)

    def test_length_is_total_orbit_size(self):
        pd = PointData(I, (FactorOrbit(PuiseuxGerm(I, {F(4, 3): 1}), 2), FactorOrbit(PuiseuxGerm(I, {2: 1j}))))
        assert len(instantiate(pd, Direction(I, 0.1))) == 4
        assert pd.total_rank == 3 * 2 + 1 and pd.ramification == 3

    def test_mismatched_direction(self):
        with pytest.raises(MismatchedBasePoint):
            instantiate(AIRY, Direction(Z, 0.0))


class TestStructure:
    def test_airy(self):
        s = stokes_structure(AIRY)
        assert s.angles == pytest.approx([math.pi / 3, math.pi, 5 * math.pi / 3])
        sec = s.sector_at(0.0)
        rows = {round(r.germ.coeff(F(3, 2)).real, 9): r for r in sec.ranks}
        plus, minus = rows[round(2 / 3, 9)], rows[round(-2 / 3, 9)]
        assert (plus.f_le, plus.f_lt, plus.gr) == (2, 1, 1)
        assert (minus.f_le, minus.f_lt, minus.gr) == (1, 0, 1)
        assert sec.ranks[sec.dominance_order()[0]] is plus

    def test_singleton_has_no_rays(self):
        s = stokes_structure(PointData(Z, (FactorOrbit(PuiseuxGerm(Z, {1: 1})),)))
        assert s.rays == () and len(s.sectors) == 1
        assert s.sectors[0].ranks[0].gr == 1

    def test_opposite_poles_swap(self):
        pd = PointData(Z, (FactorOrbit(PuiseuxGerm(Z, {1: 1})), FactorOrbit(PuiseuxGerm(Z, {1: -1}))))
        s = stokes_structure(pd)
        assert s.angles == pytest.approx([math.pi / 2, 3 * math.pi / 2])
        a, b = s.sectors
        assert a.below != b.below and a.below and b.below

    def test_midpoint_default(self):
        assert smallest_midpoint(AIRY).angle == pytest.approx(0.0)
        lone = PointData(Z, (FactorOrbit(PuiseuxGerm(Z, {1: 1})),))
        assert smallest_midpoint(lone).angle == 0.0


class TestRanks:
    d0 = Direction(I, 0.0)

    def test_gr(self):
        assert gr_rank(AIRY, self.d0, G_PLUS) == 1
        assert gr_rank(AIRY, self.d0, G_PLUS + 5) == 1
        assert gr_rank(AIRY, self.d0, PuiseuxGerm(I, {1: 1})) == 0

    def test_filtration(self):
        assert filtration_rank(AIRY, self.d0, G_PLUS) == 2
        assert filtration_rank(AIRY, self.d0, G_PLUS, strict=True) == 1
        assert filtration_rank(AIRY, self.d0, PuiseuxGerm.zero(I)) == 1
        assert filtration_rank(AIRY, self.d0, PuiseuxGerm(I, {2: -1})) == 0

    def test_nongeneric(self):
        with pytest.raises(NonGenericDirection):
            filtration_rank(AIRY, Direction(I, math.pi / 3), G_PLUS)

    def test_multiplicities_counted(self):
        pd = PointData(Z, (FactorOrbit(PuiseuxGerm(Z, {1: 1}), 2), FactorOrbit(PuiseuxGerm(Z, {1: -1}), 3)))
        d = Direction(Z, 0.0)
        top = PuiseuxGerm(Z, {1: 1})
        assert filtration_rank(pd, d, top) == 5
        assert filtration_rank(pd, d, top, strict=True) == 3
        assert gr_rank(pd, d, top) == 2

    def test_gr_picks_matching_conjugate(self):
        g = [h for h, _ in instantiate(AIRY, Direction(I, 1.0, 1))]
        assert any(same_class(h, G_PLUS) for h in g) and any(same_class(h, G_MINUS) for h in g)
