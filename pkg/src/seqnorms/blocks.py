"""Block bases: expansion maps, the T equivalence-constant envelope, and
lower semi-homogeneity probes."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import List, Optional, Sequence, Tuple

from .core import (
    ConfigurationError,
    FiniteVector,
    Number,
    SpaceSpec,
    eval_norm,
)

CJT_LOWER = Fraction(1, 3)
CJT_UPPER = 18


@dataclass(frozen=True)
class BlockBasisSpec:
    """Breakpoints p_1 < ... < p_{J+1} and coefficients on (p_1, p_last].

    Block j is u_j = sum of a_n x_n over p_j < n <= p_{j+1}; every block
    must be nonzero.  ``coefficients[i]`` is a_n for n = p_1 + 1 + i.
    """

    breakpoints: Tuple[int, ...]
    coefficients: Tuple[Number, ...]

    def __post_init__(self):
        bp = self.breakpoints
        if len(bp) < 2:
            raise ConfigurationError("need at least two breakpoints")
        if any(b < 0 for b in bp) or any(b >= c for b, c in zip(bp, bp[1:])):
            raise ConfigurationError("breakpoints must be strictly increasing naturals")
        expected = bp[-1] - bp[0]
        if len(self.coefficients) != expected:
            raise ConfigurationError(
                f"expected {expected} coefficients on ({bp[0]}, {bp[-1]}], got {len(self.coefficients)}"
            )
        for j in range(1, self.block_count + 1):
            if all(a == 0 for a in self._block_slice(j)):
                raise ConfigurationError(f"block {j} is zero")

    @property
    def block_count(self) -> int:
        return len(self.breakpoints) - 1

    def coefficient_at(self, n: int) -> Number:
        if self.breakpoints[0] < n <= self.breakpoints[-1]:
            return self.coefficients[n - self.breakpoints[0] - 1]
        return 0

    def _block_slice(self, j: int) -> Tuple[Number, ...]:
        lo, hi = self.breakpoints[j - 1], self.breakpoints[j]
        base = self.breakpoints[0]
        return self.coefficients[lo - base : hi - base]

    def block_vector(self, j: int) -> FiniteVector:
        lo, hi = self.breakpoints[j - 1], self.breakpoints[j]
        return FiniteVector.from_pairs(
            (n, self.coefficient_at(n)) for n in range(lo + 1, hi + 1)
        )

    def block_of_position(self, n: int) -> Optional[int]:
        for j in range(1, self.block_count + 1):
            if self.breakpoints[j - 1] < n <= self.breakpoints[j]:
                return j
        return None


def block_vectors(
    spec: BlockBasisSpec, space: SpaceSpec, normalize: bool
) -> List[FiniteVector]:
    """The block vectors u_j, optionally normalized in the given space."""
    out = []
    for j in range(1, spec.block_count + 1):
        u = spec.block_vector(j)
        if u.is_zero:
            raise ConfigurationError(f"block {j} is zero")
        if normalize:
            nrm = eval_norm(space, u)
            if isinstance(nrm, Fraction) or isinstance(nrm, int):
                u = u.scale(Fraction(1, 1) / nrm)
            else:
                u = u.scale(1.0 / nrm)
        out.append(u)
    return out


def expand_coefficients(c: FiniteVector, spec: BlockBasisSpec) -> FiniteVector:
    """The expansion map: position n inside block j receives c_j * a_n.

    By construction the expanded vector is sum_j c_j u_j, so its norm in any
    space equals the norm of that block combination.
    """
    J = spec.block_count
    if any(n > J for n in c.support):
        raise ConfigurationError(f"coefficients must be supported on 1..{J}")
    pairs = []
    for n in range(spec.breakpoints[0] + 1, spec.breakpoints[-1] + 1):
        j = spec.block_of_position(n)
        cj = c.coefficient(j)
        if cj != 0:
            pairs.append((n, cj * spec.coefficient_at(n)))
    return FiniteVector.from_pairs(pairs)


def _normalized_spec(spec: BlockBasisSpec, space: SpaceSpec) -> Tuple[BlockBasisSpec, List[Number]]:
    """Rescale each block to norm one; returns the new spec and the factors."""
    factors = []
    coeffs: List[Number] = []
    for j in range(1, spec.block_count + 1):
        u = spec.block_vector(j)
        nrm = eval_norm(space, u)
        factors.append(nrm)
        for a in spec._block_slice(j):
            if isinstance(nrm, (Fraction, int)):
                coeffs.append(Fraction(a) / nrm)
            else:
                coeffs.append(a / nrm)
    return BlockBasisSpec(spec.breakpoints, tuple(coeffs)), factors


@dataclass(frozen=True)
class CjtCheck:
    ratio: Number
    passed: bool
    numerator: Number
    denominator: Number
    normalization_factors: Tuple[Number, ...]


def cjt_ratio_check(
    spec: BlockBasisSpec,
    b: FiniteVector,
    picks: Sequence[int],
    alpha: Number = Fraction(1, 2),
) -> CjtCheck:
    """Ratio of ||sum b_j y_j|| to ||sum b_j t_{k_j}|| in Tsirelson(alpha).

    The blocks are normalized here rather than trusted; the picks k_j must
    satisfy p_j < k_j <= p_{j+1}.  Pass iff the ratio lies in [1/3, 18].
    """
    if b.is_zero:
        raise ConfigurationError("undefined ratio: b = 0")
    J = spec.block_count
    if len(picks) != J:
        raise ConfigurationError(f"need one pick per block ({J})")
    for j, k in enumerate(picks, start=1):
        if not (spec.breakpoints[j - 1] < k <= spec.breakpoints[j]):
            raise ConfigurationError(f"pick {k} outside block {j}")
    space = SpaceSpec.tsirelson(alpha)
    normalized, factors = _normalized_spec(spec, space)
    numerator = eval_norm(space, expand_coefficients(b, normalized))
    comparison = FiniteVector.from_pairs(
        (picks[j - 1], b.coefficient(j)) for j in range(1, J + 1)
    )
    denominator = eval_norm(space, comparison)
    ratio = numerator / denominator if denominator != 0 else None
    if ratio is None:
        raise ConfigurationError("undefined ratio: comparison vector has norm 0")
    if isinstance(ratio, Fraction) and ratio.denominator == 1:
        ratio = int(ratio)
    passed = CJT_LOWER <= ratio <= CJT_UPPER
    return CjtCheck(
        ratio=ratio,
        passed=passed,
        numerator=numerator,
        denominator=denominator,
        normalization_factors=tuple(factors),
    )


@dataclass(frozen=True)
class LshReport:
    """Lower semi-homogeneity probe: worst ratio over the samples of
    ||sum b_j x_j|| to ||sum b_j u_j|| for normalized blocks u_j."""

    ratios: Tuple[Number, ...]
    worst: Optional[Number]
    bound: Optional[Number]
    passed: Optional[bool]
    skipped: int = 0


def lsh_probe(
    space: SpaceSpec,
    spec: BlockBasisSpec,
    samples: Sequence[FiniteVector],
    bound: Optional[Number] = None,
) -> LshReport:
    normalized, _ = _normalized_spec(spec, space)
    ratios: List[Number] = []
    skipped = 0
    for b in samples:
        if b.is_zero:
            skipped += 1
            continue
        blocked = eval_norm(space, expand_coefficients(b, normalized))
        basis_side = eval_norm(
            space,
            FiniteVector.from_pairs((j, b.coefficient(j)) for j in b.support),
        )
        ratios.append(basis_side / blocked)
    worst = max(ratios, default=None)
    passed = None if bound is None or worst is None else worst <= bound
    return LshReport(
        ratios=tuple(ratios), worst=worst, bound=bound, passed=passed, skipped=skipped
    )


def random_block_spec(
    rng: Random,
    max_position: int = 30,
    max_blocks: int = 6,
    coeff_grid: Sequence[Number] = (
        Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(1, 2), Fraction(1), Fraction(2),
    ),
) -> BlockBasisSpec:
    """Seeded random block basis: consecutive intervals with geometric-ish
    lengths, coefficients from a small rational grid."""
    blocks = rng.randint(1, max_blocks)
    start = rng.randint(0, 2)
    breakpoints = [start]
    for _ in range(blocks):
        length = 1
        while length < 4 and rng.random() < 0.4:
            length += 1
        nxt = breakpoints[-1] + length
        if nxt > max_position:
            break
        breakpoints.append(nxt)
    if len(breakpoints) < 2:
        breakpoints = [start, start + 1]
    coeffs = []
    for j in range(len(breakpoints) - 1):
        width = breakpoints[j + 1] - breakpoints[j]
        block = [rng.choice(coeff_grid) for _ in range(width)]
        if all(a == 0 for a in block):
            block[rng.randrange(width)] = Fraction(1)
        coeffs.extend(block)
    return BlockBasisSpec(tuple(breakpoints), tuple(coeffs))


def random_picks(rng: Random, spec: BlockBasisSpec) -> List[int]:
    return [
        rng.randint(spec.breakpoints[j - 1] + 1, spec.breakpoints[j])
        for j in range(1, spec.block_count + 1)
    ]
