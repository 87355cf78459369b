"""Partial-sum and tail-norm diagnostics for sum a_n x_n.

Finite truncation cannot decide convergence, so verdicts are three-valued
trends and explicitly heuristic; divergence in Tsirelson space is
additionally backed by exact certificates.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .core import (
    BudgetError,
    ConfigurationError,
    FiniteVector,
    INF,
    Number,
    SpaceSpec,
    eval_norm,
    is_exact,
    parse_scalar,
)
from . import classical, tsirelson

DEFAULT_SUPPORT_BUDGET = 4096
DEFAULT_SHRINK_THRESHOLD = 0.01
DEFAULT_WINDOW = 3
DEFAULT_WITNESS_BUDGET = 5

CONVERGING = "converging-trend"
DIVERGING = "diverging-trend"
INCONCLUSIVE = "inconclusive"


# ---------------------------------------------------------------------------
# Coefficient generators


@dataclass(frozen=True)
class CoefficientGenerator:
    """Deterministic coefficient sequences; exact rationals for rational forms.

    harmonic: a_n = 1/(n+1).  power(s): a_n = n^-s.  constant(c).  table.
    """

    kind: str
    s: Optional[Number] = None
    c: Optional[Number] = None
    table: Tuple[Number, ...] = ()

    def __post_init__(self):
        if self.kind not in ("harmonic", "power", "constant", "table"):
            raise ConfigurationError(f"unknown generator {self.kind!r}")
        if self.kind == "power" and self.s is None:
            raise ConfigurationError("power generator needs an exponent")
        if self.kind == "constant" and self.c is None:
            raise ConfigurationError("constant generator needs a value")

    @staticmethod
    def harmonic() -> "CoefficientGenerator":
        return CoefficientGenerator("harmonic")

    @staticmethod
    def power(s: Number) -> "CoefficientGenerator":
        return CoefficientGenerator("power", s=s)

    @staticmethod
    def constant(c: Number) -> "CoefficientGenerator":
        return CoefficientGenerator("constant", c=c)

    @staticmethod
    def from_table(values: Sequence[Number]) -> "CoefficientGenerator":
        return CoefficientGenerator("table", table=tuple(values))

    def value(self, n: int) -> Number:
        if n < 1:
            raise ConfigurationError("positions are 1-based")
        if self.kind == "harmonic":
            return Fraction(1, n + 1)
        if self.kind == "power":
            if is_exact(self.s) and Fraction(self.s).denominator == 1:
                return Fraction(1, n ** int(self.s))
            return float(n) ** -float(self.s)
        if self.kind == "constant":
            return self.c
        return self.table[n - 1] if n <= len(self.table) else 0

    def vector(self, lo: int, hi: int) -> FiniteVector:
        """Coefficients on positions [lo, hi]."""
        return FiniteVector.from_pairs((n, self.value(n)) for n in range(lo, hi + 1))

    def describe(self) -> str:
        if self.kind == "harmonic":
            return "harmonic"
        if self.kind == "power":
            return f"power:s={self.s}"
        if self.kind == "constant":
            return f"constant:c={self.c}"
        return f"table[{len(self.table)}]"


def parse_generator(descriptor: str, exact: bool = True) -> CoefficientGenerator:
    descriptor = descriptor.strip()
    if descriptor == "harmonic":
        return CoefficientGenerator.harmonic()
    if descriptor.startswith("power:s="):
        return CoefficientGenerator.power(parse_scalar(descriptor[len("power:s="):], exact=exact))
    if descriptor.startswith("constant:c="):
        return CoefficientGenerator.constant(parse_scalar(descriptor[len("constant:c="):], exact=exact))
    if descriptor.startswith("table:"):
        values = [parse_scalar(t, exact=exact) for t in descriptor[len("table:"):].split(";")]
        return CoefficientGenerator.from_table(values)
    raise ConfigurationError(f"unknown generator descriptor {descriptor!r}")


# ---------------------------------------------------------------------------
# Partial sums and tail profiles


def _check_budget(space: SpaceSpec, N: int, budget: int):
    if space.variant in ("tsirelson", "tsirelson_h") and N > budget:
        raise BudgetError(
            f"Tsirelson evaluation over {N} positions exceeds the budget {budget}; "
            "rerun with a smaller N or a larger --budget-support"
        )


def partial_sum_norms(
    space: SpaceSpec,
    gen: CoefficientGenerator,
    N: int,
    budget: int = DEFAULT_SUPPORT_BUDGET,
) -> List[Number]:
    """Prefix norms ||sum_{n<=K} a_n x_n|| for K = 1..N."""
    if N < 1:
        raise ConfigurationError("N must be >= 1")
    _check_budget(space, N, budget)
    coeffs = [gen.value(n) for n in range(1, N + 1)]
    if space.variant in ("tsirelson", "tsirelson_h"):
        v = FiniteVector.from_pairs(zip(range(1, N + 1), coeffs))
        h = space.h if space.variant == "tsirelson_h" else None
        return tsirelson.prefix_norms(space.alpha, v, list(range(1, N + 1)), h=h)
    if space.variant == "c0" or (space.variant == "lp" and space.p == INF):
        out, running = [], 0
        for a in coeffs:
            running = max(running, abs(a))
            out.append(running)
        return out
    if space.variant == "lp":
        p = space.p
        out = []
        if p == 1:
            running = 0
            for a in coeffs:
                running = running + abs(a)
                out.append(running)
            return out
        running = 0
        for a in coeffs:
            running = running + classical._power(abs(a), p)
            out.append(classical._root(running, p))
        return out
    out = []
    for K in range(1, N + 1):
        out.append(eval_norm(space, FiniteVector.from_pairs(zip(range(1, K + 1), coeffs[:K]))))
    return out


@dataclass(frozen=True)
class TailProfile:
    """Tail norms ||sum_{m <= n < N} a_n x_n|| over a grid of (m, N) pairs."""

    entries: Tuple[Tuple[int, int, Number], ...]  # (m, N, value)
    space: SpaceSpec
    generator: CoefficientGenerator

    def value(self, m: int, N: int) -> Number:
        for mm, nn, val in self.entries:
            if mm == m and nn == N:
                return val
        raise KeyError((m, N))


def tail_profile(
    space: SpaceSpec,
    gen: CoefficientGenerator,
    grid: Sequence[Tuple[int, int]],
    budget: int = DEFAULT_SUPPORT_BUDGET,
) -> TailProfile:
    entries = []
    for m, N in grid:
        if not (1 <= m < N):
            raise ConfigurationError(f"need 1 <= m < N, got ({m}, {N})")
        _check_budget(space, N, budget)
        v = gen.vector(m, N - 1)
        entries.append((m, N, eval_norm(space, v)))
    return TailProfile(entries=tuple(entries), space=space, generator=gen)


def convergence_verdict(
    profile: TailProfile,
    shrink_threshold: Number = DEFAULT_SHRINK_THRESHOLD,
    window: int = DEFAULT_WINDOW,
    certified_lower_bound: Optional[Number] = None,
    growth_threshold: Optional[Number] = None,
) -> str:
    """Heuristic three-valued trend from a tail profile.

    Converging: every tail with m among the last ``window`` grid cut points
    is below ``shrink_threshold``.  Diverging: a certified lower bound, or a
    monotone-growing tail, exceeds ``growth_threshold`` (default
    1/shrink_threshold).  Otherwise inconclusive.
    """
    if growth_threshold is None:
        growth_threshold = 1 / Fraction(shrink_threshold) if is_exact(shrink_threshold) else 1.0 / shrink_threshold
    entries = profile.entries
    if certified_lower_bound is not None and certified_lower_bound > growth_threshold:
        return DIVERGING
    if len(entries) < 2:
        return INCONCLUSIVE
    ms = sorted({m for m, _, _ in entries})
    late = set(ms[-window:])
    if all(val < shrink_threshold for m, _, val in entries if m in late):
        return CONVERGING
    m0 = ms[0]
    growth = sorted(((N, val) for m, N, val in entries if m == m0))
    values = [val for _, val in growth]
    if (
        len(values) >= 2
        and all(b >= a for a, b in zip(values, values[1:]))
        and values[-1] > growth_threshold
    ):
        return DIVERGING
    return INCONCLUSIVE


@dataclass(frozen=True)
class DominationReport:
    dom_verdict: str
    sub_verdict: str
    witnesses_non_domination: bool
    dom_profile: TailProfile
    sub_profile: TailProfile


def default_tail_grid(N: int) -> List[Tuple[int, int]]:
    """Dyadic cut points against the horizon N, plus a dyadic horizon ladder.

    The (m, N) entries expose shrinking tails; the (1, n) ladder exposes
    prefix growth in the horizon, which the divergence check needs.
    """
    grid = []
    m = 1
    while m < N:
        grid.append((m, N))
        m *= 2
    n = 2
    while n < N:
        grid.append((1, n))
        n *= 2
    return grid


def domination_probe(
    dom_space: SpaceSpec,
    sub_space: SpaceSpec,
    gen: CoefficientGenerator,
    N: int,
    budget: int = DEFAULT_SUPPORT_BUDGET,
    shrink_threshold: Number = DEFAULT_SHRINK_THRESHOLD,
    window: int = DEFAULT_WINDOW,
    growth_threshold: Optional[Number] = None,
    sub_certified_bound: Optional[Number] = None,
) -> DominationReport:
    """Evaluate the same coefficients in both spaces and compare trends.

    A (converging, diverging) verdict pair is a finite-scale witness that the
    first space's basis does not dominate the second's.
    """
    grid = default_tail_grid(N)
    dom_profile = tail_profile(dom_space, gen, grid, budget=budget)
    dom_verdict = convergence_verdict(
        dom_profile, shrink_threshold, window, growth_threshold=growth_threshold
    )
    # a certified lower bound can settle the sub side without profiling it,
    # which matters when that space is expensive to evaluate
    trial = convergence_verdict(
        TailProfile(entries=(), space=sub_space, generator=gen),
        shrink_threshold, window,
        certified_lower_bound=sub_certified_bound, growth_threshold=growth_threshold,
    )
    if trial == DIVERGING:
        sub_profile = TailProfile(entries=(), space=sub_space, generator=gen)
        sub_verdict = DIVERGING
    else:
        sub_profile = tail_profile(sub_space, gen, grid, budget=budget)
        sub_verdict = convergence_verdict(
            sub_profile, shrink_threshold, window,
            certified_lower_bound=sub_certified_bound, growth_threshold=growth_threshold,
        )
    return DominationReport(
        dom_verdict=dom_verdict,
        sub_verdict=sub_verdict,
        witnesses_non_domination=(dom_verdict == CONVERGING and sub_verdict == DIVERGING),
        dom_profile=dom_profile,
        sub_profile=sub_profile,
    )


# ---------------------------------------------------------------------------
# The certified harmonic divergence witness in T


def harmonic_tsirelson_witness(
    k: int, budget: int = DEFAULT_WITNESS_BUDGET
) -> Tuple[Fraction, tsirelson.NormCertificate]:
    """Certified lower bound for the harmonic series in Tsirelson(1/2).

    Builds the admissible family of dyadic blocks I_j = (2^j, 2^(j+1)] for
    j = k..2k-1 (k sets, min position 2^k + 1 >= k) with singleton families
    nested inside each block, giving the exact bound

        (1/2) * sum_j (1/2) * sum_{n in I_j} 1/(n+1)
            <= || sum_{n <= 2^(2k)} t_n / (n+1) ||.

    The bound is strictly increasing in k and unbounded: each block's inner
    sum exceeds a constant on the order of log 2.
    """
    if k < 1:
        raise ConfigurationError("k must be >= 1")
    if k > budget:
        raise BudgetError(f"witness level {k} exceeds the budget {budget}")
    children = []
    bound = Fraction(0)
    for j in range(k, 2 * k):
        block = tuple(range(2 ** j + 1, 2 ** (j + 1) + 1))
        singletons = tuple(tsirelson.CertificateNode.leaf((n,)) for n in block)
        children.append(tsirelson.CertificateNode.internal(block, singletons))
        bound += Fraction(1, 2) * sum(Fraction(1, n + 1) for n in block)
    root = tsirelson.CertificateNode.internal(
        tuple(range(1, 2 ** (2 * k) + 1)), tuple(children)
    )
    cert = tsirelson.NormCertificate(root)
    lower_bound = Fraction(1, 2) * bound
    return lower_bound, cert


def harmonic_witness_prefix(k: int) -> FiniteVector:
    """The harmonic prefix vector the level-k witness bounds from below."""
    return CoefficientGenerator.harmonic().vector(1, 2 ** (2 * k))
