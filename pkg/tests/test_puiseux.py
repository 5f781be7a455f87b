import cmath
import math
from fractions import Fraction as F

import pytest

from statphase.errors import (
    DenominatorMismatch,
    IndeterminateOrder,
    MismatchedBasePoint,
    OutOfSector,
    TruncationInsufficient,
    ZeroGerm,
)
from statphase.puiseux import (
    INF,
    BasePoint,
    Comparison,
    DirectedGerm,
    Direction,
    PuiseuxGerm,
    compare_at,
    compose,
    derive,
    evaluate,
    evaluate_polar,
    is_bounded,
    monodromy,
    mul,
    orbit_size,
    pole_order,
    power,
    same_class,
    sigma,
    stokes_directions,
    turn,
)

Z = BasePoint.finite(0)
I = BasePoint.infinity()


def G(base, terms, tau=INF, p=None):
    return PuiseuxGerm(base, terms, tau, p)


class TestConstruction:
    def test_terms_sorted_and_lowest_terms(self):
        g = G(Z, {F(2, 4): 1, 2: 3})
        assert [m for m, _ in g.terms] == [2, F(1, 2)]
        assert g.ramification == 2

    def test_terms_below_known_order_dropped(self):
        # at tau = 1 the constant term is still known, z^1 is not
        g = G(Z, {2: 1, 0: 5, -1: 2}, tau=1)
        assert g.as_dict() == {2: 1, 0: 5}

    def test_ramification_must_cover_denominators(self):
        with pytest.raises(DenominatorMismatch):
            G(Z, {F(1, 3): 1}, p=2)

    def test_immutable(self):
        with pytest.raises(AttributeError):
            G(Z, {1: 1}).known_order = 3

    def test_direction_range(self):
        with pytest.raises(ValueError):
            Direction(Z, 7.0)
        assert Direction.from_lift(Z, 2 * math.pi + 0.5, 2) == Direction(Z, 0.5, 1)


class TestAdd:
    def test_additive_inverse(self):
        f = G(Z, {1: 1})
        assert (f + (-f)).terms == ()

    def test_disjoint_supports_min_rule(self):
        s = G(Z, {F(3, 2): 1}, tau=2) + G(Z, {1: 1}, tau=1)
        assert s.as_dict() == {F(3, 2): 1, 1: 1}
        assert s.known_order == 1 and s.ramification == 2

    def test_like_terms(self):
        s = G(Z, {1: 2}, tau=5) + G(Z, {1: 3}, tau=5)
        assert s.as_dict() == {1: 5} and s.known_order == 5

    def test_mismatched_base(self):
        with pytest.raises(MismatchedBasePoint):
            G(Z, {1: 1}) + G(I, {1: 1})

    def test_relative_cancellation(self):
        s = G(Z, {1: 1.0, 2: 1e6}) + G(Z, {1: -1.0 + 1e-13, 2: 1.0})
        assert s.coeff(1) == 0


class TestMul:
    def test_exponent_addition(self):
        assert mul(G(Z, {1: 1}), G(Z, {F(1, 2): 1})).as_dict() == {F(3, 2): 1}

    def test_identity(self):
        f = G(Z, {2: 1 + 1j, 1: 3}, tau=1)
        one = PuiseuxGerm.constant(Z, 1)
        prod = mul(f, one)
        assert prod.as_dict() == f.as_dict() and prod.known_order == f.known_order

    def test_truncation_rule(self):
        # (z^-1 + 1)(z^-1 - 1) with tau = 1 each: known to tau = 0, so only z^-2 survives
        prod = mul(G(Z, {1: 1, 0: 1}, tau=1), G(Z, {1: 1, 0: -1}, tau=1))
        assert prod.known_order == 0
        assert prod.as_dict() == {2: 1}

    def test_exact_product(self):
        prod = mul(G(Z, {1: 1, 0: 1}), G(Z, {1: 1, 0: -1}))
        assert prod.as_dict() == {2: 1, 0: -1}


class TestDerive:
    def test_finite_power_rule(self):
        assert derive(G(Z, {1: 1})).as_dict() == {2: -1}

    def test_airy_phase(self):
        assert derive(G(I, {3: F(1, 3)})).allclose(G(I, {2: 1}))

    def test_fractional_at_infinity(self):
        assert derive(G(I, {F(1, 2): 2})).as_dict() == {F(-1, 2): 1}

    def test_known_order_shift(self):
        assert derive(G(Z, {2: 1}, tau=3)).known_order == 2
        assert derive(G(I, {2: 1}, tau=3)).known_order == 4


class TestPoleOrder:
    def test_max_exponent(self):
        assert pole_order(G(Z, {F(3, 2): 1, 1: 1})) == F(3, 2)

    def test_zero_germ(self):
        assert pole_order(PuiseuxGerm.zero(Z, known_order=1)) == -INF

    def test_constant(self):
        assert pole_order(PuiseuxGerm.constant(Z, 5)) == 0

    def test_indeterminate(self):
        with pytest.raises(IndeterminateOrder):
            pole_order(PuiseuxGerm.zero(Z, known_order=0))

    def test_is_bounded_needs_window(self):
        with pytest.raises(TruncationInsufficient):
            is_bounded(PuiseuxGerm.zero(Z, known_order=-1))


class TestSigmaMonodromy:
    def test_sigma_airy(self):
        assert sigma(G(I, {3: 1 / 3}), Direction(I, 0.0)) == pytest.approx(1 / 3)

    def test_sigma_raw_at_branch_zero(self):
        assert sigma(G(Z, {F(1, 2): 2j}), Direction(Z, 1.0)) == 2j

    def test_sigma_branch_one(self):
        assert sigma(G(Z, {F(1, 2): 1}), Direction(Z, 0.0, 1)) == pytest.approx(-1)

    def test_sigma_zero(self):
        with pytest.raises(ZeroGerm):
            sigma(PuiseuxGerm.zero(Z), Direction(Z, 0.0))

    def test_integer_exponents_fixed(self):
        f = G(Z, {1: 1})
        assert monodromy(f) == f

    def test_half_integer_at_infinity(self):
        assert monodromy(G(I, {F(3, 2): 1})).as_dict() == {F(3, 2): -1}

    def test_period(self):
        f = G(Z, {F(5, 4): 1 + 2j, F(1, 2): 3})
        assert monodromy(f, f.ramification).allclose(f, 1e-15)
        assert orbit_size(f) == 4

    def test_turn_exact_quarters(self):
        assert turn(F(1, 4)) == 1j and turn(F(-1, 2)) == -1


class TestCompare:
    def test_equal(self):
        f = G(Z, {1: 1})
        assert compare_at(f, f, Direction(Z, 1.0)) is Comparison.EQUIVALENT

    def test_below_on_positive_ray(self):
        assert compare_at(G(Z, {1: 1}), PuiseuxGerm.zero(Z), Direction(Z, 0.0)) is Comparison.STRICTLY_BELOW

    def test_incomparable_on_stokes_ray(self):
        r = compare_at(G(Z, {1: 1}), PuiseuxGerm.zero(Z), Direction(Z, math.pi / 2))
        assert r is Comparison.INCOMPARABLE

    def test_antisymmetry(self):
        # Re(i z^2) < 0 on the ray at 0.4, so f - h tends to -infinity there
        f, h, d = G(I, {2: 1j}), G(I, {1: 3}), Direction(I, 0.4)
        assert compare_at(f, h, d) is Comparison.STRICTLY_ABOVE
        assert compare_at(h, f, d) is Comparison.STRICTLY_BELOW


class TestSameClass:
    def test_constant_shift(self):
        f = G(I, {3: 1 / 3})
        assert same_class(f, f + 7)

    def test_fractional_difference(self):
        assert not same_class(G(I, {3: 1 / 3}), G(I, {3: 1 / 3, F(1, 2): 1}))

    def test_airy_pair_distinct(self):
        assert not same_class(G(I, {F(3, 2): 2 / 3}), G(I, {F(3, 2): -2 / 3}))


class TestStokes:
    def test_empty_for_equal(self):
        f = G(Z, {1: 1})
        assert stokes_directions(f, f) == []

    def test_simple_pole(self):
        dirs = stokes_directions(G(Z, {1: 1}), PuiseuxGerm.zero(Z))
        assert [d.angle for d in dirs] == pytest.approx([math.pi / 2, 3 * math.pi / 2])

    def test_airy_lifts(self):
        dirs = stokes_directions(G(I, {F(3, 2): 2 / 3}), G(I, {F(3, 2): -2 / 3}))
        lifts = [d.lift for d in dirs]
        expect = [k * math.pi / 3 for k in (1, 3, 5, 7, 9, 11)]
        assert lifts == pytest.approx(expect)
        assert sorted({round(d.angle, 9) for d in dirs}) == pytest.approx(
            [math.pi / 3, math.pi, 5 * math.pi / 3]
        )


class TestEvaluate:
    def test_polynomial(self):
        assert evaluate(G(I, {3: 1 / 3}), 2, Direction(I, 0.0)) == pytest.approx(8 / 3)

    def test_branch_lift(self):
        assert evaluate(G(Z, {F(1, 2): 1}), -1, Direction(Z, math.pi)) == pytest.approx(-1j)

    def test_zero(self):
        assert evaluate(PuiseuxGerm.zero(Z), 0.5, Direction(Z, 0.0)) == 0

    def test_out_of_sector(self):
        with pytest.raises(OutOfSector):
            evaluate(G(Z, {2: 1}), 1j, Direction(Z, math.pi))

    def test_radius_bound(self):
        with pytest.raises(OutOfSector):
            evaluate(G(Z, {1: 1}), 2.0, Direction(Z, 0.0), radius=1.0)

    def test_polar_matches_cmath(self):
        f = G(Z, {F(3, 2): 1 + 1j, F(1, 2): -2})
        z = 0.01 * cmath.exp(0.7j)
        expect = (1 + 1j) * z ** (-1.5) - 2 * z ** (-0.5)
        assert evaluate_polar(f, abs(z), 0.7) == pytest.approx(expect)


class TestPowerCompose:
    def test_power_leading(self):
        d = Direction(I, 0.2)
        sq = power(G(I, {2: 4, 1: 4, 0: 1}), F(1, 2), d, 0.4, order=6)
        assert sq.allclose(G(I, {1: 2, 0: 1}), 1e-12)

    def test_compose_inverse_pair(self):
        # f = z^2 at infinity, psi(w) = w^(1/2): f(psi) = w
        psi = DirectedGerm(G(I, {F(1, 2): 1}), Direction(I, 0.0))
        out = compose(G(I, {2: 1}), Direction(I, 0.0), psi, order=4)
        assert out.allclose(G(I, {1: 1}), 1e-12)
