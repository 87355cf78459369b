"""LSC submeasures from a basis and weight, the Fin/Null/Exh ideal triple,
turbulence and membership diagnostics.

Only finite horizons are computable here; every verdict derived from them is
heuristic and labeled as such.  The submeasure axioms themselves are exact
statements about finite sets and are checked exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .core import (
    BudgetError,
    ConfigurationError,
    FiniteVector,
    HFunction,
    Number,
    ParseError,
    SpaceSpec,
    eval_norm,
    parse_space,
)
from .series import CoefficientGenerator, parse_generator

DEFAULT_POSITION_BUDGET = 4096
DEFAULT_FLOOR = 0.01
DEFAULT_THRESHOLD = 0.01

TURBULENT = "turbulent-trend"
NOT_TURBULENT = "not-turbulent"
MEMBER = "member-trend"
NON_MEMBER = "non-member-trend"
INCONCLUSIVE = "inconclusive"

# Doubling-increment ratio cutoffs for the Fin membership heuristic.
SHRINK_RATIO = Fraction(9, 10)
FLAT_RATIO = Fraction(95, 100)


# ---------------------------------------------------------------------------
# Position-set generators


@dataclass(frozen=True)
class SetGenerator:
    """Deterministic subsets of the naturals, enumerable on any finite window."""

    kind: str  # "naturals" | "evens" | "squares" | "primes" | "dyadic" | "explicit"
    j: Optional[int] = None
    elements: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("naturals", "evens", "squares", "primes", "dyadic", "explicit"):
            raise ConfigurationError(f"unknown set generator {self.kind!r}")
        if self.kind == "dyadic" and (self.j is None or self.j < 0):
            raise ConfigurationError("dyadic block needs j >= 0")
        if self.kind == "explicit" and any(n < 1 for n in self.elements):
            raise ConfigurationError("positions are 1-based")

    @staticmethod
    def naturals() -> "SetGenerator":
        return SetGenerator("naturals")

    @staticmethod
    def evens() -> "SetGenerator":
        return SetGenerator("evens")

    @staticmethod
    def squares() -> "SetGenerator":
        return SetGenerator("squares")

    @staticmethod
    def primes() -> "SetGenerator":
        return SetGenerator("primes")

    @staticmethod
    def dyadic_block(j: int) -> "SetGenerator":
        """The block (2^j, 2^(j+1)]."""
        return SetGenerator("dyadic", j=j)

    @staticmethod
    def explicit(elements: Sequence[int]) -> "SetGenerator":
        return SetGenerator("explicit", elements=tuple(sorted(set(elements))))

    def members(self, lo: int, hi: int) -> List[int]:
        """Members in [lo, hi], increasing."""
        lo = max(lo, 1)
        if hi < lo:
            return []
        if self.kind == "naturals":
            return list(range(lo, hi + 1))
        if self.kind == "evens":
            start = lo + (lo % 2)
            return list(range(start, hi + 1, 2))
        if self.kind == "squares":
            m = 1
            out = []
            while m * m <= hi:
                if m * m >= lo:
                    out.append(m * m)
                m += 1
            return out
        if self.kind == "primes":
            return [n for n in _primes_up_to(hi) if n >= lo]
        if self.kind == "dyadic":
            return [n for n in range(2 ** self.j + 1, 2 ** (self.j + 1) + 1) if lo <= n <= hi]
        return [n for n in self.elements if lo <= n <= hi]

    def describe(self) -> str:
        if self.kind == "dyadic":
            return f"dyadic:{self.j}"
        if self.kind == "explicit":
            return "explicit:" + ";".join(str(n) for n in self.elements)
        return self.kind


def _primes_up_to(n: int) -> List[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(2, n + 1) if sieve[p]]


def parse_set(descriptor: str) -> SetGenerator:
    descriptor = descriptor.strip()
    if descriptor in ("naturals", "evens", "squares", "primes"):
        return SetGenerator(descriptor)
    if descriptor.startswith("dyadic:"):
        return SetGenerator.dyadic_block(int(descriptor[len("dyadic:"):]))
    if descriptor.startswith("explicit:"):
        return SetGenerator.explicit(
            [int(t) for t in descriptor[len("explicit:"):].split(";")]
        )
    raise ParseError(f"unknown set descriptor {descriptor!r}")


# ---------------------------------------------------------------------------
# Submeasures


@dataclass(frozen=True)
class SubmeasureSpec:
    """phi(A) from either a weighted basis or a summable weight sequence.

    basis-weight: phi(A) = ||sum_{n in A} f(n) x_{pos(n)}|| in a
    1-unconditional space, with pos the optional position map (identity when
    absent).  summable: phi(A) = sum_{n in A} weights(n).
    """

    source: str  # "basis-weight" | "summable"
    space: Optional[SpaceSpec] = None
    f: Optional[CoefficientGenerator] = None
    weights: Optional[CoefficientGenerator] = None
    position_map: Optional[HFunction] = None

    def __post_init__(self):
        if self.source == "basis-weight":
            if self.space is None or self.f is None:
                raise ConfigurationError("basis-weight needs a space and a weight generator")
            # every implemented space has a 1-unconditional unit-vector basis,
            # so no renorming is needed for monotonicity
            probe = [self.f.value(n) for n in (1, 2, 7)]
            if any(a <= 0 for a in probe):
                raise ConfigurationError("basis-weight requires f(n) > 0")
        elif self.source == "summable":
            if self.weights is None:
                raise ConfigurationError("summable needs a weight generator")
            probe = [self.weights.value(n) for n in (1, 2, 7)]
            if any(w < 0 for w in probe):
                raise ConfigurationError("summable weights must be non-negative")
        else:
            raise ConfigurationError(f"unknown submeasure source {self.source!r}")

    @staticmethod
    def basis_weight(
        space: SpaceSpec,
        f: CoefficientGenerator,
        position_map: Optional[HFunction] = None,
    ) -> "SubmeasureSpec":
        return SubmeasureSpec("basis-weight", space=space, f=f, position_map=position_map)

    @staticmethod
    def summable(weights: CoefficientGenerator) -> "SubmeasureSpec":
        return SubmeasureSpec("summable", weights=weights)

    def describe(self) -> str:
        if self.source == "summable":
            return f"summable:w={self.weights.describe()}"
        tag = f"basis-weight:space={self.space.describe()},f={self.f.describe()}"
        if self.position_map is not None:
            tag += f",h={self.position_map.kind}"
        return tag


def phi(
    spec: SubmeasureSpec,
    A: Sequence[int],
    budget: int = DEFAULT_POSITION_BUDGET,
) -> Number:
    """The submeasure of a finite position set."""
    positions = sorted(set(A))
    if any(n < 1 for n in positions):
        raise ConfigurationError("positions are 1-based")
    if not positions:
        return 0
    if spec.source == "summable":
        return sum(spec.weights.value(n) for n in positions)
    if (
        spec.space.variant in ("tsirelson", "tsirelson_h")
        and len(positions) > budget
    ):
        raise BudgetError(
            f"Tsirelson submeasure over {len(positions)} positions exceeds the budget {budget}"
        )
    pm = spec.position_map
    v = FiniteVector.from_pairs(
        (pm(n) if pm is not None else n, spec.f.value(n)) for n in positions
    )
    return eval_norm(spec.space, v)


def phi_singletons(
    spec: SubmeasureSpec, N: int, budget: int = DEFAULT_POSITION_BUDGET
) -> List[Number]:
    return [phi(spec, [n], budget=budget) for n in range(1, N + 1)]


def phi_tail_profile(
    spec: SubmeasureSpec,
    A: SetGenerator,
    cut_points: Sequence[int],
    horizon: int,
    budget: int = DEFAULT_POSITION_BUDGET,
) -> List[Number]:
    """phi(A intersect [n, horizon)) for each cut point n.

    Finite-horizon approximants to the tail submeasure; non-increasing in n
    by 1-unconditionality.
    """
    out = []
    for n in cut_points:
        if n >= horizon:
            raise ConfigurationError("cut points must be below the horizon")
        out.append(phi(spec, A.members(n, horizon - 1), budget=budget))
    return out


# ---------------------------------------------------------------------------
# Axiom checks


@dataclass(frozen=True)
class AxiomReport:
    checked: int
    passed: bool
    violations: Tuple[str, ...]


def submeasure_axiom_check(
    spec: SubmeasureSpec,
    samples: Sequence[Tuple[Sequence[int], Sequence[int]]],
    budget: int = DEFAULT_POSITION_BUDGET,
) -> AxiomReport:
    """Exact check of the submeasure axioms on finite set pairs.

    Verifies phi(empty) = 0, monotonicity, subadditivity, finiteness on
    singletons, and prefix-sup consistency for every sample pair.
    """
    violations: List[str] = []
    if phi(spec, []) != 0:
        violations.append("phi(empty) != 0")
    for x, y in samples:
        x, y = sorted(set(x)), sorted(set(y))
        union = sorted(set(x) | set(y))
        px, py, pu = (phi(spec, s, budget=budget) for s in (x, y, union))
        if pu < px or pu < py:
            violations.append(f"monotonicity fails at ({x}, {y})")
        if pu > px + py:
            violations.append(f"subadditivity fails at ({x}, {y})")
        for n in set(x[:1] + y[:1]):
            if not phi(spec, [n], budget=budget) < float("inf"):
                violations.append(f"phi({{{n}}}) not finite")
        if x:
            # LSC restricted to finite sets: phi(x) is the sup of its prefixes
            prefix_values = [
                phi(spec, [n for n in x if n < cut], budget=budget)
                for cut in sorted(set(x))
            ] + [px]
            if any(b < a for a, b in zip(prefix_values, prefix_values[1:])):
                violations.append(f"prefix values not non-decreasing at {x}")
            if max(prefix_values) != px:
                violations.append(f"prefix sup differs from phi at {x}")
    return AxiomReport(checked=len(samples), passed=not violations, violations=tuple(violations))


# ---------------------------------------------------------------------------
# Turbulence and membership diagnostics


def turbulence_criterion(
    spec: SubmeasureSpec,
    N: int,
    floor: Number = DEFAULT_FLOOR,
    budget: int = DEFAULT_POSITION_BUDGET,
) -> str:
    """Finite-scale reading of the phi({n}) -> 0 criterion.

    not-turbulent when the singleton values stay bounded below by ``floor``
    along the last half; turbulent-trend when they decrease monotonically to
    below ``floor``; otherwise inconclusive.
    """
    if N < 1:
        raise ConfigurationError("N must be >= 1")
    values = phi_singletons(spec, N, budget=budget)
    tail = values[N // 2 :]
    if min(tail) >= floor:
        return NOT_TURBULENT
    if all(b <= a for a, b in zip(values, values[1:])) and values[-1] < floor:
        return TURBULENT
    return INCONCLUSIVE


@dataclass(frozen=True)
class IdealSpec:
    """A named ideal derived from a submeasure: Fin, Null, or Exh."""

    submeasure: SubmeasureSpec
    kind: str  # "Fin" | "Null" | "Exh"
    name: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("Fin", "Null", "Exh"):
            raise ConfigurationError(f"unknown ideal kind {self.kind!r}")

    @staticmethod
    def summable_ideal(weights: CoefficientGenerator) -> "IdealSpec":
        name = "I_{1/n}" if weights == CoefficientGenerator.power(1) else None
        return IdealSpec(SubmeasureSpec.summable(weights), "Fin", name=name)

    @staticmethod
    def tsirelson_ideal(
        alpha: Number, h: HFunction, f: CoefficientGenerator
    ) -> "IdealSpec":
        # sets A with sum f(n) t_{h(n)} convergent; convergence shows up as
        # vanishing tails, so the Exh diagnostics apply
        spec = SubmeasureSpec.basis_weight(
            SpaceSpec.tsirelson(alpha), f,
            position_map=None if h.kind == "identity" else h,
        )
        return IdealSpec(spec, "Exh", name="T_{f,h,alpha}")

    def describe(self) -> str:
        base = f"{self.kind}({self.submeasure.describe()})"
        return f"{self.name} = {base}" if self.name else base


def _doubling_cuts(N: int) -> List[int]:
    cuts = [N]
    while cuts[-1] > 1:
        cuts.append(cuts[-1] // 2)
    return list(reversed(cuts))


def membership_verdict(
    ideal: IdealSpec,
    A: SetGenerator,
    horizon: int,
    threshold: Number = DEFAULT_THRESHOLD,
    budget: int = DEFAULT_POSITION_BUDGET,
) -> str:
    """Heuristic membership trend of A in the ideal at a finite horizon.

    Fin: looks at phi of the prefixes A intersect [1, n] along doubling cut
    points; when the increments shrink geometrically the total extrapolates
    to a finite bound (member-trend), when they stay flat the sums grow
    without bound (non-member-trend).  Exh: tail values below ``threshold``
    mean member-trend, tails bounded away from 0 mean non-member-trend.
    Null: phi of the whole window against ``threshold``.
    """
    if horizon < 2:
        raise ConfigurationError("horizon must be >= 2")
    spec = ideal.submeasure
    if ideal.kind == "Null":
        total = phi(spec, A.members(1, horizon), budget=budget)
        return MEMBER if total < threshold else NON_MEMBER
    if ideal.kind == "Exh":
        cuts = [c for c in _doubling_cuts(horizon) if c < horizon]
        tails = phi_tail_profile(spec, A, cuts, horizon, budget=budget)
        late = tails[len(tails) // 2 :]
        if all(t < threshold for t in late):
            return MEMBER
        if min(late) >= threshold and all(b <= a for a, b in zip(tails, tails[1:])):
            return NON_MEMBER
        return INCONCLUSIVE
    cuts = _doubling_cuts(horizon)
    prefixes = [phi(spec, A.members(1, c), budget=budget) for c in cuts]
    increments = [b - a for a, b in zip(prefixes, prefixes[1:])]
    if not increments or increments[-1] == 0:
        return MEMBER  # the set is exhausted below the horizon
    if len(increments) < 2 or increments[-2] == 0:
        return INCONCLUSIVE
    ratio = increments[-1] / increments[-2]
    if ratio <= SHRINK_RATIO:
        return MEMBER
    if ratio >= FLAT_RATIO and increments[-1] > 0:
        return NON_MEMBER
    return INCONCLUSIVE


# ---------------------------------------------------------------------------
# Descriptor parsing


def _parse_weight_generator(text: str) -> CoefficientGenerator:
    # in ideal descriptors "harmonic" names the 1/n weights of I_{1/n}
    if text == "harmonic":
        return CoefficientGenerator.power(1)
    if text == "one":
        return CoefficientGenerator.constant(1)
    return parse_generator(text)


def parse_ideal(descriptor: str) -> IdealSpec:
    """Parse an ideal descriptor, e.g. "summable:w=harmonic" or
    "tsirelson-ideal:alpha=1/2,h=identity,f=harmonic"."""
    from .core import _parse_h, _parse_kv, parse_scalar

    descriptor = descriptor.strip()
    name, _, body = descriptor.partition(":")
    try:
        kv = _parse_kv(body)
        if name == "summable":
            return IdealSpec.summable_ideal(_parse_weight_generator(kv.get("w", "harmonic")))
        if name == "tsirelson-ideal":
            alpha = parse_scalar(kv["alpha"])
            h = _parse_h(kv.get("h", "identity"))
            f = _parse_weight_generator(kv.get("f", "one"))
            return IdealSpec.tsirelson_ideal(alpha, h, f)
        if name == "basis-weight":
            space = parse_space(kv["space"])
            f = _parse_weight_generator(kv.get("f", "one"))
            kind = kv.get("kind", "Fin")
            return IdealSpec(SubmeasureSpec.basis_weight(space, f), kind)
    except KeyError as exc:
        raise ParseError(f"missing parameter {exc} in {descriptor!r}") from None
    except ConfigurationError as exc:
        raise ParseError(str(exc)) from None
    raise ParseError(f"unknown ideal descriptor {descriptor!r}")
