from fractions import Fraction
from random import Random

import pytest

from seqnorms.core import BudgetError, ConfigurationError, HFunction, ParseError, SpaceSpec
from seqnorms.series import CoefficientGenerator
from seqnorms.ideals import (
    IdealSpec,
    MEMBER,
    NON_MEMBER,
    NOT_TURBULENT,
    TURBULENT,
    SetGenerator,
    SubmeasureSpec,
    membership_verdict,
    parse_ideal,
    parse_set,
    phi,
    phi_tail_profile,
    submeasure_axiom_check,
    turbulence_criterion,
)

HALF = Fraction(1, 2)
RECIPROCAL = CoefficientGenerator.power(1)  # weights 1/n


class TestSetGenerators:
    def test_evens(self):
        assert SetGenerator.evens().members(1, 9) == [2, 4, 6, 8]

    def test_squares(self):
        assert SetGenerator.squares().members(2, 20) == [4, 9, 16]

    def test_primes(self):
        assert SetGenerator.primes().members(1, 12) == [2, 3, 5, 7, 11]

    def test_dyadic_block(self):
        assert SetGenerator.dyadic_block(2).members(1, 100) == [5, 6, 7, 8]

    def test_parse(self):
        assert parse_set("evens").kind == "evens"
        assert parse_set("explicit:3;1;3").members(1, 10) == [1, 3]
        with pytest.raises(ParseError):
            parse_set("odds")


class TestPhi:
    def test_summable_direct_sum(self):
        spec = SubmeasureSpec.summable(RECIPROCAL)
        assert phi(spec, [1, 2, 4]) == Fraction(7, 4)

    def test_empty_set(self):
        for spec in (
            SubmeasureSpec.summable(RECIPROCAL),
            SubmeasureSpec.basis_weight(SpaceSpec.lp(1), CoefficientGenerator.constant(1)),
        ):
            assert phi(spec, []) == 0

    def test_tsirelson_unit_weight(self):
        spec = SubmeasureSpec.basis_weight(
            SpaceSpec.tsirelson(HALF), CoefficientGenerator.constant(1)
        )
        assert phi(spec, [4, 5, 6]) == Fraction(3, 2)

    def test_position_map_reindexes(self):
        # with positions doubled, {1, 2} lands on basis vectors 2 and 4
        spec = SubmeasureSpec.basis_weight(
            SpaceSpec.tsirelson(HALF),
            CoefficientGenerator.constant(1),
            position_map=HFunction.affine(2, 0),
        )
        assert phi(spec, [1, 2]) == 1  # ||t_2 + t_4|| = 1

    def test_budget(self):
        spec = SubmeasureSpec.basis_weight(
            SpaceSpec.tsirelson(HALF), CoefficientGenerator.constant(1)
        )
        with pytest.raises(BudgetError):
            phi(spec, list(range(1, 20)), budget=10)

    def test_negative_weight_rejected_at_construction(self):
        with pytest.raises(ConfigurationError):
            SubmeasureSpec.summable(CoefficientGenerator.constant(-1))
        with pytest.raises(ConfigurationError):
            SubmeasureSpec.basis_weight(SpaceSpec.lp(1), CoefficientGenerator.constant(0))


class TestTailProfile:
    def test_square_summable_tails_shrink(self):
        spec = SubmeasureSpec.summable(CoefficientGenerator.power(2))
        values = phi_tail_profile(spec, SetGenerator.naturals(), [101], 3000)
        assert float(values[0]) < 0.01

    def test_finite_set_tail_zero(self):
        spec = SubmeasureSpec.summable(RECIPROCAL)
        values = phi_tail_profile(spec, SetGenerator.explicit([2, 5]), [6], 100)
        assert values == [0]

    def test_evens_tail_large(self):
        spec = SubmeasureSpec.summable(RECIPROCAL)
        values = phi_tail_profile(spec, SetGenerator.evens(), [2], 2000)
        assert float(values[0]) >= 3.4

    def test_tails_non_increasing_in_cut(self):
        spec = SubmeasureSpec.basis_weight(SpaceSpec.lp(2), RECIPROCAL)
        values = phi_tail_profile(spec, SetGenerator.naturals(), [1, 4, 16], 64)
        assert values[0] >= values[1] >= values[2]


class TestAxioms:
    def _pairs(self, seed, count):
        rng = Random(seed)
        return [
            (
                sorted(rng.sample(range(1, 41), rng.randint(0, 6))),
                sorted(rng.sample(range(1, 41), rng.randint(0, 6))),
            )
            for _ in range(count)
        ]

    def test_summable_passes(self):
        spec = SubmeasureSpec.summable(RECIPROCAL)
        report = submeasure_axiom_check(spec, self._pairs(1, 50))
        assert report.passed and report.checked == 50

    def test_l1_weighted_passes_and_is_additive(self):
        spec = SubmeasureSpec.basis_weight(SpaceSpec.lp(1), CoefficientGenerator.power(2))
        report = submeasure_axiom_check(spec, self._pairs(2, 50))
        assert report.passed
        # disjoint union attains subadditivity with equality
        assert phi(spec, [1, 3]) + phi(spec, [2, 4]) == phi(spec, [1, 2, 3, 4])

    def test_tsirelson_weighted_passes(self):
        spec = SubmeasureSpec.basis_weight(SpaceSpec.tsirelson(HALF), RECIPROCAL)
        report = submeasure_axiom_check(spec, self._pairs(3, 30))
        assert report.passed


class TestTurbulence:
    def test_reciprocal_weights_turbulent(self):
        spec = SubmeasureSpec.summable(RECIPROCAL)
        assert turbulence_criterion(spec, 200) == TURBULENT
        assert all(phi(spec, [n]) <= Fraction(1, 100) for n in range(100, 201))

    def test_tsirelson_unit_weight_not_turbulent(self):
        spec = SubmeasureSpec.basis_weight(
            SpaceSpec.tsirelson(HALF), CoefficientGenerator.constant(1)
        )
        assert turbulence_criterion(spec, 64) == NOT_TURBULENT
        assert phi(spec, [17]) == 1

    def test_tsirelson_reciprocal_weight_turbulent(self):
        spec = SubmeasureSpec.basis_weight(SpaceSpec.tsirelson(HALF), RECIPROCAL)
        assert turbulence_criterion(spec, 128) == TURBULENT


class TestMembership:
    def test_squares_in_reciprocal_ideal(self):
        ideal = IdealSpec.summable_ideal(RECIPROCAL)
        assert membership_verdict(ideal, SetGenerator.squares(), 1000) == MEMBER

    def test_evens_not_in_reciprocal_ideal(self):
        ideal = IdealSpec.summable_ideal(RECIPROCAL)
        assert membership_verdict(ideal, SetGenerator.evens(), 1000) == NON_MEMBER

    def test_finite_set_always_member(self):
        for ideal in (
            IdealSpec.summable_ideal(RECIPROCAL),
            IdealSpec.tsirelson_ideal(HALF, HFunction.identity(), RECIPROCAL),
        ):
            assert membership_verdict(ideal, SetGenerator.explicit([3, 7]), 64) == MEMBER

    def test_null_kind_thresholds_whole_window(self):
        ideal = IdealSpec(SubmeasureSpec.summable(CoefficientGenerator.power(3)), "Null")
        assert membership_verdict(ideal, SetGenerator.explicit([10]), 100) == MEMBER
        assert membership_verdict(ideal, SetGenerator.naturals(), 100) == NON_MEMBER


class TestDescriptors:
    def test_summable(self):
        ideal = parse_ideal("summable:w=harmonic")
        assert ideal.name == "I_{1/n}" and ideal.kind == "Fin"
        assert phi(ideal.submeasure, [1, 2, 4]) == Fraction(7, 4)

    def test_tsirelson_ideal(self):
        ideal = parse_ideal("tsirelson-ideal:alpha=1/2,h=identity,f=harmonic")
        assert ideal.kind == "Exh"
        assert ideal.submeasure.space.alpha == HALF
        assert phi(ideal.submeasure, [5]) == Fraction(1, 5)

    def test_bad_descriptor(self):
        with pytest.raises(ParseError):
            parse_ideal("density:w=harmonic")
        with pytest.raises(ParseError):
            parse_ideal("tsirelson-ideal:h=identity")
