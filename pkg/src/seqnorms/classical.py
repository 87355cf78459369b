"""Norms for l_p, c_0, Orlicz (Luxemburg functional) and Lorentz d(w,p).

The Luxemburg norm is the unique rho > 0 with sum_n M(|v(n)|/rho) = 1,
found by bracketing and bisection on the monotone map rho -> sum M(|v(n)|/rho).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .core import (
    ConfigurationError,
    FiniteVector,
    INF,
    Number,
    WeightSpec,
    is_exact,
    parse_scalar,
)


# ---------------------------------------------------------------------------
# Orlicz functions


@dataclass(frozen=True)
class OrliczFunction:
    """Convex non-decreasing M with M(0)=0 and M(t) -> infinity.

    Either a power M(t) = t^p with p >= 1, or a table of (t, M(t)) knots
    with linear interpolation (and linear extension past the last knot).
    """

    kind: str  # "power" | "table"
    p: Optional[Number] = None
    knots: Tuple[Tuple[Number, Number], ...] = ()

    def __post_init__(self):
        if self.kind == "power":
            if self.p is None or self.p < 1:
                raise ConfigurationError("power Orlicz function needs p >= 1")
        elif self.kind == "table":
            knots = self.knots
            if len(knots) < 1:
                raise ConfigurationError("Orlicz table needs at least one knot")
            ts = [t for t, _ in knots]
            if any(t <= 0 for t in ts) or ts != sorted(set(ts)):
                raise ConfigurationError("Orlicz knots need strictly increasing t > 0")
            full = ((0, 0),) + knots
            values = [m for _, m in full]
            if any(b < a for a, b in zip(values, values[1:])):
                raise ConfigurationError("Orlicz table must be non-decreasing")
            slopes = []
            for (t0, m0), (t1, m1) in zip(full, full[1:]):
                slopes.append(Fraction(m1 - m0, 1) / (t1 - t0) if is_exact(m1 - m0) and is_exact(t1 - t0) else (m1 - m0) / (t1 - t0))
            if any(b < a for a, b in zip(slopes, slopes[1:])):
                raise ConfigurationError("Orlicz table must be convex")
            if slopes[-1] <= 0:
                raise ConfigurationError("Orlicz table must be unbounded (final slope > 0)")
        else:
            raise ConfigurationError(f"unknown Orlicz kind {self.kind!r}")

    @staticmethod
    def power(p: Number) -> "OrliczFunction":
        return OrliczFunction("power", p=p)

    @staticmethod
    def from_knots(knots: Sequence[Tuple[Number, Number]]) -> "OrliczFunction":
        return OrliczFunction("table", knots=tuple(knots))

    def __call__(self, t: Number) -> Number:
        if t < 0:
            raise ConfigurationError("Orlicz functions are defined for t >= 0")
        if self.kind == "power":
            return _power(t, self.p)
        full = ((0, 0),) + self.knots
        for (t0, m0), (t1, m1) in zip(full, full[1:]):
            if t <= t1:
                return m0 + (m1 - m0) * (t - t0) / (t1 - t0)
        t0, m0 = self.knots[-1]
        tp, mp = full[-2]
        slope = (m0 - mp) / (t0 - tp)
        return m0 + slope * (t - t0)

    def describe(self) -> str:
        if self.kind == "power":
            return f"power={self.p}"
        return f"table[{len(self.knots)} knots]"


def load_orlicz_table(path: str) -> OrliczFunction:
    """Two-column text file of (t, M(t)) knots, strictly increasing t."""
    knots = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ConfigurationError(f"Orlicz table line needs two columns: {line!r}")
            knots.append((parse_scalar(parts[0]), parse_scalar(parts[1])))
    return OrliczFunction.from_knots(knots)


def _power(t: Number, p: Number) -> Number:
    if is_exact(t) and is_exact(p) and Fraction(p).denominator == 1:
        return t ** int(p)
    return float(t) ** float(p)


def _integer_root(n: int, p: int) -> int:
    """floor(n ** (1/p)) for n >= 0, by Newton iteration on integers."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + p - 1) // p + 1)
    while True:
        nxt = ((p - 1) * x + n // x ** (p - 1)) // p
        if nxt >= x:
            return x
        x = nxt


def _exact_root(value: Fraction, p: int) -> Optional[Fraction]:
    """value ** (1/p) if it is rational, else None."""
    def iroot(n: int) -> Optional[int]:
        r = _integer_root(n, p)
        return r if r ** p == n else None

    value = Fraction(value)
    num = iroot(value.numerator)
    den = iroot(value.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _root(value: Number, p: Number) -> Number:
    """value ** (1/p), exact when the root is rational."""
    if is_exact(value) and is_exact(p) and Fraction(p).denominator == 1:
        exact = _exact_root(Fraction(value), int(p))
        if exact is not None:
            return int(exact) if exact.denominator == 1 else exact
    return float(value) ** (1.0 / float(p))


# ---------------------------------------------------------------------------
# Norms


def lp_norm(p: Number, v: FiniteVector) -> Number:
    """(sum |v(n)|^p)^(1/p); the sup norm for p = infinity."""
    if p == INF:
        return v.sup()
    if p < 1:
        raise ConfigurationError("lp requires p >= 1")
    if p == 1:
        return v.abs_sum()
    total = 0
    for a in v.coeffs:
        total = total + _power(abs(a), p)
    return _root(total, p)


def lorentz_norm(w: WeightSpec, p: Number, v: FiniteVector) -> Number:
    """(sum (v*_n)^p w_n)^(1/p) with v* the non-increasing rearrangement.

    The sup over permutations is attained at this rearrangement because the
    weights are non-increasing.
    """
    if p < 1:
        raise ConfigurationError("lorentz requires p >= 1")
    rearranged = sorted((abs(a) for a in v.coeffs if a != 0), reverse=True)
    total = 0
    for i, a in enumerate(rearranged):
        total = total + _power(a, p) * w.weight(i)
    if p == 1:
        return total
    return _root(total, p)


def _luxemburg_functional(M: OrliczFunction, entries: Sequence[Number], u: Number) -> Number:
    """sum M(|a| * u) over the entries, as a function of u = 1/rho."""
    total = 0
    for a in entries:
        total = total + M(a * u)
    return total


def luxemburg_norm(M: OrliczFunction, v: FiniteVector, tol: float = 1e-10) -> Number:
    """The Luxemburg norm: the rho > 0 with sum M(|v(n)|/rho) = 1.

    Works in u = 1/rho, where the functional is non-decreasing.  A secant
    step is tried first: when the functional is linear in u (e.g. M(t) = t
    on the relevant range) the root is exact and verified exactly for
    rational inputs.  Otherwise the root is bracketed by doubling/halving
    and bisected until the residual is within ``tol``.
    """
    if tol <= 0:
        raise ConfigurationError("tolerance must be positive")
    entries = [abs(a) for a in v.coeffs if a != 0]
    if not entries:
        return 0
    sup = max(entries)

    exact = all(is_exact(a) for a in entries)
    if exact:
        u1 = Fraction(1, 1) / sup
        u2 = 2 * u1
        try:
            f1 = _luxemburg_functional(M, entries, u1)
            f2 = _luxemburg_functional(M, entries, u2)
        except ConfigurationError:
            f1 = f2 = None
        if (
            f1 is not None
            and is_exact(f1)
            and is_exact(f2)
            and f2 != f1
        ):
            u_star = u1 + (1 - f1) * (u2 - u1) / (f2 - f1)
            if u_star > 0 and _luxemburg_functional(M, entries, u_star) == 1:
                rho = 1 / Fraction(u_star)
                return int(rho) if rho.denominator == 1 else rho

    entries_f = [float(a) for a in entries]
    sup_f = float(sup)

    def g(u: float) -> float:
        return float(_luxemburg_functional(M, entries_f, u))

    # Bracket the root in u: g is non-decreasing with g(0) = 0.
    u_hi = 1.0 / sup_f
    steps = 0
    while g(u_hi) < 1.0:
        u_hi *= 2.0
        steps += 1
        if steps > 200:
            raise ConfigurationError("Orlicz function does not norm this vector")
    u_lo = u_hi / 2.0
    while g(u_lo) > 1.0:
        u_hi = u_lo
        u_lo /= 2.0
        steps += 1
        if steps > 400:
            raise ConfigurationError("Orlicz function does not norm this vector")

    for _ in range(200):
        u_mid = 0.5 * (u_lo + u_hi)
        val = g(u_mid)
        if abs(val - 1.0) <= tol:
            return 1.0 / u_mid
        if val < 1.0:
            u_lo = u_mid
        else:
            u_hi = u_mid
        if u_hi - u_lo <= tol * u_lo:
            break
    return 2.0 / (u_lo + u_hi)


# ---------------------------------------------------------------------------
# Delta'-condition probe


@dataclass(frozen=True)
class DeltaPrimeReport:
    """Empirical evidence for M(xy) >= c M(x) M(y) on (0, x0]^2.

    A finite grid cannot prove the condition; the verdict is evidence only.
    Power functions are multiplicative, recognized symbolically and reported
    exact.
    """

    x0: Number
    resolution: int
    empirical_c: Optional[Number]
    verdict: str  # "plausible" | "violated-at"
    witness: Optional[Tuple[Number, Number]] = None
    symbolic: bool = False
    notes: Tuple[str, ...] = ()


def delta_prime_probe(
    M: OrliczFunction,
    x0: Number,
    resolution: int,
    floor: float = 1e-9,
) -> DeltaPrimeReport:
    """Scan a geometric grid of (x, y) in (0, x0]^2 for the ratio M(xy)/(M(x)M(y))."""
    if x0 <= 0:
        raise ConfigurationError("x0 must be positive")
    if resolution < 2:
        raise ConfigurationError("resolution must be >= 2")
    if M.kind == "power":
        # M(xy) = M(x) M(y) identically: the ratio is 1 at every grid point.
        return DeltaPrimeReport(
            x0=x0, resolution=resolution, empirical_c=1, verdict="plausible", symbolic=True
        )
    grid = [float(x0) * 0.5 ** i for i in range(resolution)]
    best: Optional[float] = None
    witness = None
    notes: List[str] = []
    for x in grid:
        for y in grid:
            mx, my, mxy = float(M(x)), float(M(y)), float(M(x * y))
            if mx == 0.0 or my == 0.0:
                if mxy > 0.0:
                    notes.append(f"skipped grid point ({x}, {y}): M vanishes below M(xy)")
                continue
            ratio = mxy / (mx * my)
            if best is None or ratio < best:
                best = ratio
                witness = (x, y)
    if best is not None and best < floor:
        return DeltaPrimeReport(
            x0=x0, resolution=resolution, empirical_c=best,
            verdict="violated-at", witness=witness, notes=tuple(notes),
        )
    return DeltaPrimeReport(
        x0=x0, resolution=resolution, empirical_c=best,
        verdict="plausible", notes=tuple(notes),
    )
