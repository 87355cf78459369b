from fractions import Fraction

import pytest

from seqnorms.core import (
    ConfigurationError,
    FiniteVector,
    GridSpec,
    HFunction,
    ParseError,
    QuantizationError,
    SpaceSpec,
    WeightSpec,
    eval_norm,
    format_scalar,
    parse_scalar,
    parse_space,
    parse_vector,
    quantize_to_grid,
    support_of,
)


class TestFiniteVector:
    def test_trailing_zeros_trimmed(self):
        assert FiniteVector.from_dense([1, 0, 0]) == FiniteVector.from_dense([1])
        assert FiniteVector.from_dense([0, 0]).is_zero

    def test_support(self):
        assert support_of(FiniteVector.from_dense([0, 3, 0, 1])) == (2, 4)
        assert support_of(FiniteVector.zero()) == ()
        assert support_of(FiniteVector.from_dense([1])) == (1,)

    def test_coefficient_out_of_range_is_zero(self):
        v = FiniteVector.from_dense([5])
        assert v.coefficient(3) == 0

    def test_from_pairs_accumulates(self):
        v = FiniteVector.from_pairs([(2, 1), (2, 2)])
        assert v.coefficient(2) == 3

    def test_arithmetic(self):
        u = FiniteVector.from_dense([1, 2])
        v = FiniteVector.from_dense([0, -2, 3])
        assert (u + v) == FiniteVector.from_dense([1, 0, 3])
        assert (u - u).is_zero
        assert u.scale(Fraction(1, 2)) == FiniteVector.from_dense([Fraction(1, 2), 1])

    def test_restrict(self):
        v = FiniteVector.from_dense([1, 2, 3])
        assert v.restrict([2]) == FiniteVector.from_pairs([(2, 2)])


class TestScalars:
    def test_parse_fraction(self):
        assert parse_scalar("3/4") == Fraction(3, 4)
        assert parse_scalar("2") == 2
        assert parse_scalar("0.5") == Fraction(1, 2)
        assert parse_scalar("0.5", exact=False) == 0.5

    def test_parse_garbage(self):
        with pytest.raises(ParseError):
            parse_scalar("x/y")

    def test_format_round_trip(self):
        assert format_scalar(Fraction(3, 4)) == "3/4"
        assert format_scalar(5) == "5"


class TestHFunction:
    def test_identity(self):
        h = HFunction.identity()
        assert h(3) == 3 and h.inverse(3) == 3

    def test_affine(self):
        h = HFunction.affine(2, 0)
        assert h(1) == 2 and h(3) == 6
        assert h.inverse(6) == 3 and h.inverse(5) is None

    def test_table_domain(self):
        h = HFunction.from_table([(1, 2), (2, 5)])
        assert h(2) == 5
        with pytest.raises(ConfigurationError):
            h(3)

    def test_table_must_increase(self):
        with pytest.raises(ConfigurationError):
            HFunction.from_table([(1, 3), (2, 3)])


class TestWeightSpec:
    def test_harmonic(self):
        w = WeightSpec.harmonic()
        assert w.weight(0) == 1 and w.weight(1) == Fraction(1, 2)

    def test_geometric_rejected(self):
        with pytest.raises(ConfigurationError):
            WeightSpec.geometric(Fraction(1, 2))

    def test_table_validation(self):
        with pytest.raises(ConfigurationError):
            WeightSpec.from_table([Fraction(1, 2)])  # w_0 must be 1
        with pytest.raises(ConfigurationError):
            WeightSpec.from_table([1, 2])  # increasing


class TestEvalNorm:
    def test_euclidean(self):
        assert eval_norm(SpaceSpec.lp(2), FiniteVector.from_dense([3, 4])) == 5

    def test_tsirelson_pair(self):
        v = FiniteVector.from_dense([1, 1])
        assert eval_norm(SpaceSpec.tsirelson(Fraction(1, 2)), v) == 1

    def test_sup(self):
        v = FiniteVector.from_dense([1, -2, Fraction(3, 2)])
        assert eval_norm(SpaceSpec.c0(), v) == 2

    def test_bad_parameters(self):
        with pytest.raises(ConfigurationError):
            SpaceSpec.tsirelson(2)
        with pytest.raises(ConfigurationError):
            SpaceSpec.lp(Fraction(1, 2))


class TestQuantize:
    def test_snaps_to_largest_magnitude_multiple(self):
        # q=2 is the largest |q| with |0.75 - 0.5 q| < 0.5
        grid = GridSpec.from_table([Fraction(1, 2)])
        v = FiniteVector.from_dense([Fraction(3, 4)])
        out = quantize_to_grid(v, grid, [Fraction(1, 2)])
        assert out.coefficient(1) == 1

    def test_zero_stays_zero(self):
        grid = GridSpec.from_table([Fraction(1, 2), 1])
        v = FiniteVector.from_dense([0, 1])
        out = quantize_to_grid(v, grid, [Fraction(1, 2), Fraction(1, 2)])
        assert out.coefficient(1) == 0

    def test_on_grid_input_kept(self):
        grid = GridSpec.from_table([1])
        out = quantize_to_grid(FiniteVector.from_dense([1]), grid, [Fraction(1, 2)])
        assert out.coefficient(1) == 1

    def test_infeasible_names_index(self):
        grid = GridSpec.from_table([1, 4])
        v = FiniteVector.from_dense([0, 2])
        with pytest.raises(QuantizationError) as err:
            quantize_to_grid(v, grid, [1, 1])
        assert err.value.index == 2

    def test_tie_breaks_positive(self):
        # at position 1: |0 - q| < 3/2 admits q in {-1, 0, 1}; the +-1 tie
        # goes to the positive side
        grid = GridSpec.from_table([1, 1])
        v = FiniteVector.from_dense([0, 1])
        out = quantize_to_grid(v, grid, [Fraction(3, 2), Fraction(1, 2)])
        assert out.coefficient(1) == 1


class TestTextFormats:
    def test_dense_vector(self):
        assert parse_vector("3 4") == FiniteVector.from_dense([3, 4])
        assert parse_vector("1, 1/2") == FiniteVector.from_dense([1, Fraction(1, 2)])

    def test_sparse_vector(self):
        assert parse_vector("2:1 5:1/3") == FiniteVector.from_pairs(
            [(2, 1), (5, Fraction(1, 3))]
        )

    def test_mixed_tokens_rejected(self):
        with pytest.raises(ParseError):
            parse_vector("2:1 7")

    def test_space_descriptors(self):
        assert parse_space("lp:p=2").p == 2
        assert parse_space("lp:p=inf").p == float("inf")
        assert parse_space("c0").variant == "c0"
        sp = parse_space("tsirelson:alpha=1/2")
        assert sp.alpha == Fraction(1, 2)
        sph = parse_space("tsirelson:alpha=1/3,h=affine:2:0")
        assert sph.variant == "tsirelson_h" and sph.h(2) == 4
        assert parse_space("orlicz:power=2").orlicz.p == 2
        lz = parse_space("lorentz:w=harmonic,p=1")
        assert lz.weights.kind == "harmonic" and lz.p == 1

    def test_bad_descriptor(self):
        with pytest.raises(ParseError):
            parse_space("banach:p=2")
        with pytest.raises(ParseError):
            parse_space("lp:q=2")
