"""Tsirelson-type norm engine.

Two independent computation routes live here:

* a production dynamic program over interval-shaped admissible families
  (:func:`norm_level`, :func:`norm`, :func:`fixed_point_norm`), and
* a brute-force oracle over families of arbitrary finite subsets
  (:func:`oracle_norm`), exponential by design and capped by support size.

The recursion being computed, for alpha in (0,1):

    ||x||_0    = max_n |a_n|
    ||x||_m+1  = max(||x||_m, alpha * max_F sum_j ||E_j x||_m)

with the inner max over families E_1 < ... < E_r of finite sets, r = k for
the plain space (r = h(k) for the h-variant) and k <= min E_1.
"""
from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .core import (
    BudgetError,
    CertificateError,
    ConfigurationError,
    FiniteVector,
    HFunction,
    Number,
    is_exact,
)

DEFAULT_ORACLE_CAP = 8


# ---------------------------------------------------------------------------
# Admissible families


@dataclass(frozen=True)
class AdmissibleFamily:
    """An ordered family E_1 < ... < E_m with its admissibility parameter k."""

    sets: Tuple[Tuple[int, ...], ...]
    k: int

    @staticmethod
    def plain(sets: Iterable[Iterable[int]]) -> "AdmissibleFamily":
        sets = tuple(tuple(sorted(s)) for s in sets)
        return AdmissibleFamily(sets, k=len(sets))

    @staticmethod
    def variant(sets: Iterable[Iterable[int]], k: int) -> "AdmissibleFamily":
        return AdmissibleFamily(tuple(tuple(sorted(s)) for s in sets), k=k)


@dataclass(frozen=True)
class AdmissibilityResult:
    ok: bool
    reason: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


def _ordering_problem(sets: Sequence[Tuple[int, ...]]) -> Optional[str]:
    if not sets:
        return "empty-family"
    for s in sets:
        if not s:
            return "empty-set"
        if any(n < 1 for n in s):
            return "bad-position"
    for left, right in zip(sets, sets[1:]):
        if max(left) >= min(right):
            return "not-increasing"
    return None


def is_admissible(
    family, h: Optional[HFunction] = None
) -> AdmissibilityResult:
    """Check the ordering and cardinality/min constraints of a family.

    ``family`` may be an :class:`AdmissibleFamily` or a bare collection of
    position sets (k is then inferred from the family size).
    """
    if isinstance(family, AdmissibleFamily):
        sets, k = family.sets, family.k
    else:
        sets = tuple(tuple(sorted(s)) for s in family)
        k = None
    problem = _ordering_problem(sets)
    if problem:
        return AdmissibilityResult(False, problem)
    m = len(sets)
    if h is None or h.kind == "identity":
        if k is None:
            k = m
        if k != m:
            return AdmissibilityResult(False, "size-mismatch")
    else:
        if k is None:
            k = h.inverse(m)
            if k is None:
                return AdmissibilityResult(False, "size-not-in-h-range")
        elif h(k) != m:
            return AdmissibilityResult(False, "size-mismatch")
    if k > min(sets[0]):
        return AdmissibilityResult(False, "min-violation")
    return AdmissibilityResult(True)


# ---------------------------------------------------------------------------
# Level traces


@dataclass(frozen=True)
class LevelTrace:
    """Level norms up to stabilization: pairs (m, ||x||_m)."""

    levels: Tuple[Tuple[int, Number], ...]
    stabilization_level: int

    def value_at(self, m: int) -> Number:
        if m >= len(self.levels):
            return self.levels[-1][1]
        return self.levels[m][1]


# ---------------------------------------------------------------------------
# The interval dynamic program


class TsirelsonEngine:
    """Interval DP state for one coefficient vector.

    Works on the compressed support (zero runs collapse); intervals are
    support-index ranges, while admissibility constraints use the actual
    1-based positions.
    """

    def __init__(self, alpha: Number, v: FiniteVector, h: Optional[HFunction] = None):
        if not (0 < alpha < 1):
            raise ConfigurationError("alpha must lie in (0,1)")
        self.alpha = alpha
        self.h = None if (h is None or h.kind == "identity") else h
        self.pos: Tuple[int, ...] = v.support
        self.val: Tuple[Number, ...] = tuple(abs(v.coefficient(n)) for n in self.pos)
        s = len(self.pos)
        self._abs_prefix = [0] * (s + 1)
        for i, a in enumerate(self.val):
            self._abs_prefix[i + 1] = self._abs_prefix[i] + a
        self._fixed: Optional[List[List[Number]]] = None

    # -- shared pieces

    def _abs_sum(self, i: int, j: int) -> Number:
        return self._abs_prefix[j + 1] - self._abs_prefix[i]

    def _sup_table(self) -> List[List[Number]]:
        s = len(self.pos)
        table = [[0] * s for _ in range(s)]
        for i in range(s):
            running = self.val[i]
            table[i][i] = running
            for j in range(i + 1, s):
                if self.val[j] > running:
                    running = self.val[j]
                table[i][j] = running
        return table

    def _family_size(self, k: int) -> int:
        return k if self.h is None else self.h(k)

    def _best_partition(self, table, memo, a: int, j: int, r: int) -> Number:
        # Max of sum(table value over groups) over partitions of support
        # indices [a..j] into exactly r nonempty consecutive groups.
        if r == 1:
            return table[a][j]
        key = (a, j, r)
        cached = memo.get(key)
        if cached is not None:
            return cached
        best = None
        for t in range(a, j - r + 2):
            cand = table[a][t] + self._best_partition(table, memo, t + 1, j, r - 1)
            if best is None or cand > best:
                best = cand
        memo[key] = best
        return best

    def _inner_max(self, table, memo, i: int, j: int, floor_value: Number) -> Number:
        """max(floor_value, alpha * best admissible-family sum) on interval [i..j].

        ``table`` supplies the norms of strict subintervals.  Families whose
        sets are consecutive index intervals suffice here (production search);
        gaps never help because restriction shrinks the norm.  Single-set
        families are skipped: they contribute at most alpha * previous value.
        """
        best = floor_value
        k = 1
        while True:
            a = max(i, bisect_left(self.pos, k))
            if a > j:
                break
            upper = self.alpha * self._abs_sum(a, j)
            if upper <= best:
                break  # larger k only shrinks the available l1 mass
            r = self._family_size(k)
            width = j - a + 1
            if r > width:
                break  # r grows and width shrinks with k
            if r >= 2:
                cand = self.alpha * self._best_partition(table, memo, a, j, r)
                if cand > best:
                    best = cand
            k += 1
        return best

    # -- fixed-point route (no level trace)

    def fixed_point_table(self) -> List[List[Number]]:
        """Final norms of every interval restriction, by increasing length.

        Solves the implicit equation directly: on each interval the norm is
        the max of the sup of coefficients and alpha times the best admissible
        split into strictly shorter intervals.
        """
        if self._fixed is not None:
            return self._fixed
        s = len(self.pos)
        sup = self._sup_table()
        table = [[0] * s for _ in range(s)]
        memo: Dict = {}
        for length in range(1, s + 1):
            for i in range(0, s - length + 1):
                j = i + length - 1
                table[i][j] = self._inner_max(table, memo, i, j, sup[i][j])
        self._fixed = table
        return table

    def fixed_point_norm(self) -> Number:
        s = len(self.pos)
        if s == 0:
            return 0
        return self.fixed_point_table()[0][s - 1]

    def interval_norm(self, lo_pos: int, hi_pos: int) -> Number:
        """Norm of the restriction to positions in [lo_pos, hi_pos]."""
        s = len(self.pos)
        i = bisect_left(self.pos, lo_pos)
        j = bisect_left(self.pos, hi_pos + 1) - 1
        if i > j or i >= s:
            return 0
        return self.fixed_point_table()[i][j]

    def prefix_norm(self, upto_pos: int) -> Number:
        return self.interval_norm(1, upto_pos)

    # -- level route (Def-style recursion with trace)

    def _level_step(self, table) -> List[List[Number]]:
        s = len(self.pos)
        nxt = [[0] * s for _ in range(s)]
        memo: Dict = {}
        for length in range(1, s + 1):
            for i in range(0, s - length + 1):
                j = i + length - 1
                nxt[i][j] = self._inner_max(table, memo, i, j, table[i][j])
        return nxt

    def level_tables(self, m: int) -> List[List[List[Number]]]:
        tables = [self._sup_table()]
        for _ in range(m):
            tables.append(self._level_step(tables[-1]))
            if tables[-1] == tables[-2]:
                break  # table-wide fixed point; later levels repeat
        return tables

    def level_norm(self, m: int) -> Number:
        s = len(self.pos)
        if s == 0:
            return 0
        tables = self.level_tables(m)
        idx = min(m, len(tables) - 1)
        return tables[idx][0][s - 1]

    def norm_with_trace(self) -> Tuple[Number, LevelTrace]:
        s = len(self.pos)
        if s == 0:
            return 0, LevelTrace(levels=((0, 0),), stabilization_level=0)
        tables = self.level_tables(s + 1)
        if len(tables) >= 2 and tables[-1] != tables[-2]:
            raise AssertionError(
                "level recursion did not stabilize within |support| levels"
            )
        values = [t[0][s - 1] for t in tables]
        stab = len(values) - 1
        for m in range(len(values) - 1):
            if values[m + 1] == values[m]:
                stab = m
                break
        levels = tuple((m, val) for m, val in enumerate(values))
        return values[-1], LevelTrace(levels=levels, stabilization_level=stab)


def norm_level(
    alpha: Number, h: Optional[HFunction], v: FiniteVector, m: int
) -> Number:
    """The level-m norm ||v||_m of the recursion."""
    if m < 0:
        raise ConfigurationError("level must be >= 0")
    return TsirelsonEngine(alpha, v, h).level_norm(m)


def norm(
    alpha: Number, h: Optional[HFunction], v: FiniteVector
) -> Tuple[Number, LevelTrace]:
    """The fixed-point norm ||v|| together with its level trace."""
    return TsirelsonEngine(alpha, v, h).norm_with_trace()


def fixed_point_norm(
    alpha: Number, v: FiniteVector, h: Optional[HFunction] = None
) -> Number:
    """The fixed-point norm without trace bookkeeping (production path)."""
    return TsirelsonEngine(alpha, v, h).fixed_point_norm()


def prefix_norms(
    alpha: Number,
    v: FiniteVector,
    prefixes: Sequence[int],
    h: Optional[HFunction] = None,
) -> List[Number]:
    """Norms of the prefix restrictions v|[1..K] for each K, sharing one DP."""
    engine = TsirelsonEngine(alpha, v, h)
    return [engine.prefix_norm(K) for K in prefixes]


# ---------------------------------------------------------------------------
# Norm certificates


@dataclass(frozen=True)
class CertificateNode:
    """One node of a norm certificate.

    A leaf (no children) marks level-0 evaluation on its restriction.  An
    internal node carries an admissible family: the children's restrictions
    are the family's sets.
    """

    restriction: Tuple[int, ...]
    children: Tuple["CertificateNode", ...] = ()
    k: Optional[int] = None  # admissibility parameter; inferred when omitted

    @staticmethod
    def leaf(positions: Iterable[int]) -> "CertificateNode":
        return CertificateNode(tuple(sorted(positions)))

    @staticmethod
    def internal(
        positions: Iterable[int],
        children: Iterable["CertificateNode"],
        k: Optional[int] = None,
    ) -> "CertificateNode":
        return CertificateNode(tuple(sorted(positions)), tuple(children), k)


@dataclass(frozen=True)
class NormCertificate:
    root: CertificateNode


def _evaluate_node(
    node: CertificateNode,
    alpha: Number,
    h: Optional[HFunction],
    v: FiniteVector,
    path: str,
) -> Number:
    if not node.children:
        return max((abs(v.coefficient(n)) for n in node.restriction), default=0)
    sets = tuple(child.restriction for child in node.children)
    for idx, s in enumerate(sets):
        if not set(s) <= set(node.restriction):
            raise CertificateError(
                f"node {path}: child {idx} escapes its parent's restriction"
            )
    family = (
        AdmissibleFamily(sets, node.k)
        if node.k is not None
        else sets
    )
    result = is_admissible(family, h)
    if not result:
        raise CertificateError(f"node {path}: inadmissible family ({result.reason})")
    total = 0
    for idx, child in enumerate(node.children):
        total = total + _evaluate_node(child, alpha, h, v, f"{path}.{idx}")
    return alpha * total


def certificate_lower_bound(
    alpha: Number,
    h: Optional[HFunction],
    v: FiniteVector,
    cert: NormCertificate,
) -> Number:
    """Evaluate one explicit choice path through the nested maxima.

    The value is a guaranteed lower bound for norm(alpha, h, v).
    """
    if not (0 < alpha < 1):
        raise ConfigurationError("alpha must lie in (0,1)")
    return _evaluate_node(cert.root, alpha, h, v, "root")


# ---------------------------------------------------------------------------
# Brute-force oracle


def _compositions(bits: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    """All splits of an ordered bit tuple into consecutive nonempty blocks,
    each block encoded as a mask."""
    out = []
    t = len(bits)
    for pattern in range(2 ** (t - 1)):
        blocks = []
        current = 1 << bits[0]
        for idx in range(1, t):
            if pattern & (1 << (idx - 1)):
                blocks.append(current)
                current = 0
            current |= 1 << bits[idx]
        blocks.append(current)
        out.append(tuple(blocks))
    return out


def _admissible_sizes(min_pos: int, h: Optional[HFunction], reading: str) -> callable:
    """Predicate: is a family with r sets and first-set minimum min_pos admissible?"""
    if h is None:

        def ok(r: int) -> bool:
            return r <= min_pos

        return ok

    def ok_h(r: int) -> bool:
        k = h.inverse(r)
        if k is None:
            return False
        if reading == "k-min":
            return k <= min_pos
        if reading == "hk-min":
            return r <= min_pos
        raise ConfigurationError(f"unknown admissibility reading {reading!r}")

    return ok_h


def _subset_families(
    positions: Tuple[int, ...], h: Optional[HFunction], reading: str
) -> Dict[int, List[Tuple[int, ...]]]:
    """Admissible families of arbitrary subsets, grouped by restriction mask.

    Returns mask -> list of families (tuples of block masks); the list for a
    mask contains every family whose union is contained in that mask.
    """
    s = len(positions)
    per_union: List[Tuple[int, Tuple[Tuple[int, ...], ...]]] = []
    for union_mask in range(1, 1 << s):
        bits = tuple(t for t in range(s) if union_mask & (1 << t))
        min_pos = positions[bits[0]]
        size_ok = _admissible_sizes(min_pos, h, reading)
        fams = [c for c in _compositions(bits) if size_ok(len(c))]
        if fams:
            per_union.append((union_mask, tuple(fams)))
    grouped: Dict[int, List[Tuple[int, ...]]] = {m: [] for m in range(1, 1 << s)}
    for mask in range(1, 1 << s):
        bucket = grouped[mask]
        for union_mask, fams in per_union:
            if union_mask & ~mask == 0:
                bucket.extend(fams)
    return grouped


def _interval_families(
    positions: Tuple[int, ...], h: Optional[HFunction], reading: str
) -> Dict[int, List[Tuple[int, ...]]]:
    """Admissible families of integer-interval traces, per run-restriction mask.

    Restrictions reachable from the full support through interval families
    are contiguous index runs; each family set is itself a contiguous run
    (the trace of an integer interval), with gaps allowed between sets.
    """
    s = len(positions)

    def runs_within(lo: int, hi: int) -> List[Tuple[int, ...]]:
        # all sequences of >= 1 disjoint increasing runs inside [lo..hi]
        sequences: List[Tuple[int, ...]] = []

        def extend(start: int, acc: List[int]):
            if acc:
                sequences.append(tuple(acc))
            for a in range(start, hi + 1):
                for b in range(a, hi + 1):
                    run_mask = 0
                    for t in range(a, b + 1):
                        run_mask |= 1 << t
                    acc.append(run_mask)
                    extend(b + 1, acc)
                    acc.pop()

        extend(lo, [])
        return sequences

    grouped: Dict[int, List[Tuple[int, ...]]] = {}
    for lo in range(s):
        for hi in range(lo, s):
            mask = 0
            for t in range(lo, hi + 1):
                mask |= 1 << t
            fams = []
            for seq in runs_within(lo, hi):
                first_bit = (seq[0] & -seq[0]).bit_length() - 1
                size_ok = _admissible_sizes(positions[first_bit], h, reading)
                if size_ok(len(seq)):
                    fams.append(seq)
            grouped[mask] = fams
    return grouped


_family_cache: Dict[Tuple, Dict[int, List[Tuple[int, ...]]]] = {}


def _families_for(
    positions: Tuple[int, ...],
    h: Optional[HFunction],
    reading: str,
    shape: str,
) -> Dict[int, List[Tuple[int, ...]]]:
    key = (positions, h, reading, shape)
    cached = _family_cache.get(key)
    if cached is None:
        if shape == "subsets":
            cached = _subset_families(positions, h, reading)
        elif shape == "intervals":
            cached = _interval_families(positions, h, reading)
        else:
            raise ConfigurationError(f"unknown family shape {shape!r}")
        _family_cache[key] = cached
    return cached


def oracle_norm(
    alpha: Number,
    v: FiniteVector,
    cap: int = DEFAULT_ORACLE_CAP,
    h: Optional[HFunction] = None,
    family_shape: str = "subsets",
    reading: str = "k-min",
) -> Number:
    """Exact norm by exhaustive recursion over admissible families.

    Level tables over restriction subsets are iterated until they reach a
    fixed point.  Exponential in the support size; refuses supports above
    ``cap``.  ``family_shape`` selects arbitrary subsets (the literal
    definition) or integer-interval traces; ``reading`` selects the
    h-variant constraint k <= min E_1 ("k-min") or h(k) <= min E_1
    ("hk-min").
    """
    if h is not None and h.kind == "identity":
        h = None
    positions = v.support
    s = len(positions)
    if s == 0:
        return 0
    if s > cap:
        raise BudgetError(
            f"oracle support {s} exceeds cap {cap}; the search is exponential by design"
        )
    families = _families_for(positions, h, reading, family_shape)
    coeffs = [abs(v.coefficient(n)) for n in positions]

    exact = all(is_exact(c) for c in coeffs) and is_exact(alpha)
    if exact:
        alpha_frac = Fraction(alpha)
        a_num, a_den = alpha_frac.numerator, alpha_frac.denominator
        lcm = 1
        for c in coeffs:
            lcm = lcm * Fraction(c).denominator // math.gcd(lcm, Fraction(c).denominator)
        scaled = [int(Fraction(c) * lcm) for c in coeffs]
    else:
        a_num, a_den = alpha, 1
        lcm = 1
        scaled = [float(c) for c in coeffs]

    masks = sorted(families.keys())
    level = {}
    for mask in masks:
        best = 0
        for t in range(s):
            if mask & (1 << t) and scaled[t] > best:
                best = scaled[t]
        level[mask] = best

    full_mask = (1 << s) - 1
    rounds = 0
    while True:
        nxt = {}
        changed = False
        for mask in masks:
            base = a_den * level[mask]
            inner = 0
            for fam in families.get(mask, ()):
                total = 0
                for block in fam:
                    total += level[block]
                if total > inner:
                    inner = total
            cand = a_num * inner
            value = base if base >= cand else cand
            nxt[mask] = value
            if value != base:
                changed = True
        level = nxt
        rounds += 1
        if not changed:
            break
        if rounds > s + 1:
            raise AssertionError("oracle level iteration failed to stabilize")
    raw = level[full_mask]
    if exact:
        return Fraction(raw, lcm * a_den ** rounds)
    return raw / (lcm * 1.0 * a_den ** rounds)
