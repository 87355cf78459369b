"""Shared value types, space descriptors, grid quantization, and the norm dispatcher.

Positions are 1-based throughout.  External dense arrays are read as 0-based
and shifted on load (see :func:`parse_vector`).

Scalars are plain Python numbers: ``int``/``Fraction`` for exact-rational
mode, ``float`` for binary-floating mode.  A computation is exact iff every
input scalar is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Tuple, Union

Number = Union[int, Fraction, float]

DEFAULT_REL_TOL = 1e-12


class ConfigurationError(ValueError):
    """Invalid or unsupported parameter combination."""


class ParseError(ValueError):
    """Malformed vector file or descriptor string."""


class BudgetError(RuntimeError):
    """An evaluation exceeds the configured search/support budget."""


class QuantizationError(ValueError):
    """No grid multiple satisfies the strict quantization bound."""

    def __init__(self, index: int, message: str):
        super().__init__(message)
        self.index = index


class CertificateError(ValueError):
    """A norm certificate is structurally invalid at some node."""


def is_exact(x: Number) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def all_exact(xs: Iterable[Number]) -> bool:
    return all(is_exact(x) for x in xs)


def close(a: Number, b: Number, rel_tol: float = DEFAULT_REL_TOL) -> bool:
    """Equality up to relative tolerance; exact when both sides are exact."""
    if is_exact(a) and is_exact(b):
        return a == b
    return math.isclose(a, b, rel_tol=rel_tol, abs_tol=rel_tol)


def parse_scalar(text: str, exact: bool = True) -> Number:
    """Parse a decimal string or an integer fraction ``p/q``."""
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            value = Fraction(int(num), int(den))
        elif exact:
            value = Fraction(text)
        else:
            return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad scalar {text!r}: {exc}") from None
    if not exact:
        return float(value)
    if value.denominator == 1:
        return int(value)
    return value


def format_scalar(x: Number) -> str:
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    return repr(x) if isinstance(x, float) else str(x)


# ---------------------------------------------------------------------------
# Finite vectors


@dataclass(frozen=True)
class FiniteVector:
    """A finitely supported coefficient sequence.

    ``coeffs[n-1]`` is the coefficient at position ``n``; trailing zeros are
    trimmed on construction, so two vectors are equal iff their trimmed
    coefficient tuples are equal.
    """

    coeffs: Tuple[Number, ...]

    def __post_init__(self):
        trimmed = list(self.coeffs)
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        object.__setattr__(self, "coeffs", tuple(trimmed))

    @staticmethod
    def from_dense(values: Sequence[Number]) -> "FiniteVector":
        return FiniteVector(tuple(values))

    @staticmethod
    def from_pairs(pairs: Iterable[Tuple[int, Number]]) -> "FiniteVector":
        items = dict()
        for pos, val in pairs:
            if pos < 1:
                raise ConfigurationError(f"positions are 1-based, got {pos}")
            items[pos] = items.get(pos, 0) + val
        if not items:
            return FiniteVector(())
        top = max(items)
        return FiniteVector(tuple(items.get(n, 0) for n in range(1, top + 1)))

    @staticmethod
    def unit(n: int) -> "FiniteVector":
        return FiniteVector.from_pairs([(n, 1)])

    @staticmethod
    def zero() -> "FiniteVector":
        return FiniteVector(())

    def coefficient(self, n: int) -> Number:
        if 1 <= n <= len(self.coeffs):
            return self.coeffs[n - 1]
        return 0

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(n for n, a in enumerate(self.coeffs, start=1) if a != 0)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def is_exact(self) -> bool:
        return all_exact(self.coeffs)

    def restrict(self, positions: Iterable[int]) -> "FiniteVector":
        keep = set(positions)
        return FiniteVector.from_pairs(
            (n, a) for n, a in enumerate(self.coeffs, start=1) if n in keep and a != 0
        )

    def __add__(self, other: "FiniteVector") -> "FiniteVector":
        top = max(len(self.coeffs), len(other.coeffs))
        return FiniteVector(
            tuple(self.coefficient(n) + other.coefficient(n) for n in range(1, top + 1))
        )

    def __sub__(self, other: "FiniteVector") -> "FiniteVector":
        return self + other.scale(-1)

    def scale(self, c: Number) -> "FiniteVector":
        return FiniteVector(tuple(c * a for a in self.coeffs))

    def flip_signs(self, signs: Sequence[int]) -> "FiniteVector":
        """Multiply coefficient at position n by signs[n-1] (each +-1)."""
        return FiniteVector(
            tuple(a * signs[n - 1] for n, a in enumerate(self.coeffs, start=1))
        )

    def abs_sum(self) -> Number:
        return sum(abs(a) for a in self.coeffs)

    def sup(self) -> Number:
        return max((abs(a) for a in self.coeffs), default=0)


def support_of(v: FiniteVector) -> Tuple[int, ...]:
    """Positions of nonzero coefficients, in increasing order."""
    return v.support


# ---------------------------------------------------------------------------
# Parameter types


@dataclass(frozen=True)
class HFunction:
    """A strictly increasing family-size function k -> h(k), h(k) >= 1."""

    kind: str  # "identity" | "affine" | "table"
    a: int = 1
    b: int = 0
    table: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.kind == "affine":
            if self.a < 1 or self.a * 1 + self.b < 1:
                raise ConfigurationError("affine h must be strictly increasing with h(1) >= 1")
        elif self.kind == "table":
            ks = [k for k, _ in self.table]
            hs = [h for _, h in self.table]
            if not self.table or ks != sorted(set(ks)):
                raise ConfigurationError("h table needs distinct increasing keys")
            if any(h2 <= h1 for h1, h2 in zip(hs, hs[1:])) or hs[0] < 1:
                raise ConfigurationError("h must be strictly increasing with values >= 1")
        elif self.kind != "identity":
            raise ConfigurationError(f"unknown h kind {self.kind!r}")

    @staticmethod
    def identity() -> "HFunction":
        return HFunction("identity")

    @staticmethod
    def affine(a: int, b: int) -> "HFunction":
        return HFunction("affine", a=a, b=b)

    @staticmethod
    def from_table(pairs: Iterable[Tuple[int, int]]) -> "HFunction":
        return HFunction("table", table=tuple(sorted(pairs)))

    @property
    def domain_bound(self) -> Optional[int]:
        return self.table[-1][0] if self.kind == "table" else None

    def __call__(self, k: int) -> int:
        if k < 1:
            raise ConfigurationError("h is defined for k >= 1")
        if self.kind == "identity":
            return k
        if self.kind == "affine":
            return self.a * k + self.b
        for key, val in self.table:
            if key == k:
                return val
        raise ConfigurationError(f"h table has no entry for k={k} (domain bound {self.domain_bound})")

    def inverse(self, m: int) -> Optional[int]:
        """The k with h(k) == m, or None."""
        if self.kind == "identity":
            return m if m >= 1 else None
        if self.kind == "affine":
            k, rem = divmod(m - self.b, self.a)
            return k if rem == 0 and k >= 1 else None
        for key, val in self.table:
            if val == m:
                return key
        return None


@dataclass(frozen=True)
class GridSpec:
    """Per-position grid mesh; position n uses epsilon index n-1.

    Default closed form is the dyadic mesh eps_i = 2^-i (so position 1 has
    mesh 1).
    """

    kind: str = "dyadic"  # "dyadic" | "table"
    table: Tuple[Number, ...] = ()

    def __post_init__(self):
        if self.kind == "table":
            if not self.table or any(e <= 0 for e in self.table):
                raise ConfigurationError("grid meshes must be positive")
        elif self.kind != "dyadic":
            raise ConfigurationError(f"unknown grid kind {self.kind!r}")

    @staticmethod
    def dyadic() -> "GridSpec":
        return GridSpec("dyadic")

    @staticmethod
    def from_table(values: Sequence[Number]) -> "GridSpec":
        return GridSpec("table", table=tuple(values))

    def epsilon_at(self, position: int) -> Number:
        if position < 1:
            raise ConfigurationError("positions are 1-based")
        if self.kind == "dyadic":
            return Fraction(1, 2 ** (position - 1))
        if position > len(self.table):
            raise ConfigurationError(f"grid table has no mesh for position {position}")
        return self.table[position - 1]


@dataclass(frozen=True)
class WeightSpec:
    """Lorentz weights: w_0 = 1, positive, non-increasing, divergent sum.

    Closed forms with a finite sum are rejected at construction; for tables
    the declared-divergent flag is caller-asserted metadata.
    """

    kind: str  # "harmonic" | "table"
    table: Tuple[Number, ...] = ()
    declared_divergent: bool = True

    def __post_init__(self):
        if self.kind == "table":
            t = self.table
            if not t or t[0] != 1:
                raise ConfigurationError("weight table must start with w_0 = 1")
            if any(w <= 0 for w in t):
                raise ConfigurationError("weights must be positive")
            if any(b > a for a, b in zip(t, t[1:])):
                raise ConfigurationError("weights must be non-increasing")
        elif self.kind != "harmonic":
            raise ConfigurationError(f"unknown weight kind {self.kind!r}")

    @staticmethod
    def harmonic() -> "WeightSpec":
        return WeightSpec("harmonic")

    @staticmethod
    def geometric(r: Number) -> "WeightSpec":
        # Sum of a geometric sequence is finite, so it can never be a valid
        # Lorentz weight; rejected here so the failure mode is explicit.
        raise ConfigurationError("geometric weights have a finite sum; not a Lorentz weight")

    @staticmethod
    def from_table(values: Sequence[Number], declared_divergent: bool = False) -> "WeightSpec":
        return WeightSpec("table", table=tuple(values), declared_divergent=declared_divergent)

    def weight(self, n: int) -> Number:
        """w_n for n >= 0."""
        if n < 0:
            raise ConfigurationError("weight index must be >= 0")
        if self.kind == "harmonic":
            return Fraction(1, n + 1)
        if n >= len(self.table):
            # Non-increasing tail extension keeps finite evaluations total.
            return self.table[-1]
        return self.table[n]


# ---------------------------------------------------------------------------
# Space descriptors

INF = float("inf")


@dataclass(frozen=True)
class SpaceSpec:
    """Descriptor selecting one of the supported sequence-space norms."""

    variant: str  # "lp" | "c0" | "tsirelson" | "tsirelson_h" | "orlicz" | "lorentz"
    p: Optional[Number] = None
    alpha: Optional[Number] = None
    h: Optional[HFunction] = None
    orlicz: Optional["object"] = None  # classical.OrliczFunction
    weights: Optional[WeightSpec] = None

    def __post_init__(self):
        if self.variant == "lp":
            if self.p is None or (self.p != INF and self.p < 1):
                raise ConfigurationError("lp requires p >= 1 or p = inf")
        elif self.variant == "c0":
            pass
        elif self.variant in ("tsirelson", "tsirelson_h"):
            if self.alpha is None or not (0 < self.alpha < 1):
                raise ConfigurationError("tsirelson requires alpha in (0,1)")
            if self.variant == "tsirelson_h" and self.h is None:
                raise ConfigurationError("tsirelson_h requires an h function")
        elif self.variant == "orlicz":
            if self.orlicz is None:
                raise ConfigurationError("orlicz requires an Orlicz function")
        elif self.variant == "lorentz":
            if self.weights is None or self.p is None or self.p < 1:
                raise ConfigurationError("lorentz requires weights and p >= 1")
        else:
            raise ConfigurationError(f"unknown space variant {self.variant!r}")

    @staticmethod
    def lp(p: Number) -> "SpaceSpec":
        return SpaceSpec("lp", p=p)

    @staticmethod
    def c0() -> "SpaceSpec":
        return SpaceSpec("c0")

    @staticmethod
    def tsirelson(alpha: Number) -> "SpaceSpec":
        return SpaceSpec("tsirelson", alpha=alpha)

    @staticmethod
    def tsirelson_h(alpha: Number, h: HFunction) -> "SpaceSpec":
        return SpaceSpec("tsirelson_h", alpha=alpha, h=h)

    @staticmethod
    def orlicz_space(M) -> "SpaceSpec":
        return SpaceSpec("orlicz", orlicz=M)

    @staticmethod
    def lorentz(w: WeightSpec, p: Number) -> "SpaceSpec":
        return SpaceSpec("lorentz", weights=w, p=p)

    def describe(self) -> str:
        if self.variant == "lp":
            return f"lp:p={'inf' if self.p == INF else format_scalar(self.p)}"
        if self.variant == "c0":
            return "c0"
        if self.variant == "tsirelson":
            return f"tsirelson:alpha={format_scalar(self.alpha)}"
        if self.variant == "tsirelson_h":
            return f"tsirelson:alpha={format_scalar(self.alpha)},h={self.h.kind}"
        if self.variant == "orlicz":
            return f"orlicz:{self.orlicz.describe()}"
        return f"lorentz:w={self.weights.kind},p={format_scalar(self.p)}"


def eval_norm(space: SpaceSpec, v: FiniteVector, tol: float = 1e-10) -> Number:
    """Norm of sum(v(n) * x_n) in the space selected by ``space``."""
    from . import classical, tsirelson

    if space.variant == "lp":
        return classical.lp_norm(space.p, v)
    if space.variant == "c0":
        return v.sup()
    if space.variant == "tsirelson":
        return tsirelson.fixed_point_norm(space.alpha, v)
    if space.variant == "tsirelson_h":
        return tsirelson.fixed_point_norm(space.alpha, v, h=space.h)
    if space.variant == "orlicz":
        return classical.luxemburg_norm(space.orlicz, v, tol=tol)
    if space.variant == "lorentz":
        return classical.lorentz_norm(space.weights, space.p, v)
    raise ConfigurationError(f"unsupported space {space.variant!r}")


# ---------------------------------------------------------------------------
# Grid quantization


def _strict_range_ints(lo: Number, hi: Number) -> Tuple[int, int]:
    """Integers q with lo < q < hi, as an inclusive (qmin, qmax) pair."""
    qmin = math.floor(lo) + 1
    qmax = math.ceil(hi) - 1
    return qmin, qmax


def quantize_to_grid(
    v: FiniteVector, target: GridSpec, bounds: Sequence[Number]
) -> FiniteVector:
    """Snap each coordinate to the target grid.

    Output(i) = q_i * eps_i where |q_i| is maximal subject to the strict bound
    |v(i) - q_i eps_i| < bounds(i); a tie between +q and -q is broken toward
    the positive q.
    """
    out = []
    for pos in range(1, len(v.coeffs) + 1):
        x = v.coefficient(pos)
        eps = target.epsilon_at(pos)
        if pos > len(bounds):
            raise ConfigurationError(f"no bound supplied for position {pos}")
        bound = bounds[pos - 1]
        if bound <= 0:
            raise ConfigurationError("quantization bounds must be positive")
        if is_exact(x) and is_exact(eps) and is_exact(bound):
            lo = Fraction(x - bound, 1) / eps
            hi = Fraction(x + bound, 1) / eps
        else:
            lo = (x - bound) / eps
            hi = (x + bound) / eps
        qmin, qmax = _strict_range_ints(lo, hi)
        if qmin > qmax:
            raise QuantizationError(
                pos, f"no integer multiple of {format_scalar(eps)} within "
                f"{format_scalar(bound)} of {format_scalar(x)} at position {pos}"
            )
        if abs(qmax) > abs(qmin):
            q = qmax
        elif abs(qmin) > abs(qmax):
            q = qmin
        else:
            q = max(qmin, qmax)  # |qmin| == |qmax|: prefer the positive one
        out.append(q * eps)
    return FiniteVector(tuple(out))


# ---------------------------------------------------------------------------
# Text formats (vectors and space descriptors)


def parse_vector(text: str, exact: bool = True) -> FiniteVector:
    """Parse a vector record.

    Dense form: whitespace/comma separated values, read as a 0-based array
    and shifted to 1-based positions.  Sparse form: tokens ``pos:value``
    with 1-based positions.  Values are decimal strings or fractions "p/q".
    """
    tokens = [t for t in text.replace(",", " ").split() if t]
    if not tokens:
        return FiniteVector.zero()
    if any(":" in t for t in tokens):
        pairs = []
        for t in tokens:
            if ":" not in t:
                raise ParseError(f"mixed sparse/dense vector token {t!r}")
            pos_text, val_text = t.split(":", 1)
            try:
                pos = int(pos_text)
            except ValueError:
                raise ParseError(f"bad position {pos_text!r}") from None
            if pos < 1:
                raise ParseError(f"sparse positions are 1-based, got {pos}")
            pairs.append((pos, parse_scalar(val_text, exact=exact)))
        return FiniteVector.from_pairs(pairs)
    return FiniteVector.from_dense([parse_scalar(t, exact=exact) for t in tokens])


def _parse_kv(body: str) -> Mapping[str, str]:
    out = {}
    if not body:
        return out
    for chunk in body.split(","):
        if "=" not in chunk:
            raise ParseError(f"expected key=value, got {chunk!r}")
        key, val = chunk.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def _parse_h(text: str) -> HFunction:
    if text == "identity":
        return HFunction.identity()
    if text.startswith("affine:"):
        try:
            a, b = (int(t) for t in text[len("affine:"):].split(":"))
        except ValueError:
            raise ParseError(f"bad affine h {text!r}") from None
        return HFunction.affine(a, b)
    if text.startswith("table:"):
        pairs = []
        for item in text[len("table:"):].split(";"):
            try:
                k, hk = (int(t) for t in item.split(":"))
            except ValueError:
                raise ParseError(f"bad h table entry {item!r}") from None
            pairs.append((k, hk))
        return HFunction.from_table(pairs)
    raise ParseError(f"unknown h form {text!r}")


def parse_space(descriptor: str, exact: bool = True) -> SpaceSpec:
    """Parse a space mini-language string, e.g. "lp:p=2" or "tsirelson:alpha=1/2"."""
    from . import classical

    descriptor = descriptor.strip()
    name, _, body = descriptor.partition(":")
    try:
        if name == "c0":
            if body:
                raise ParseError("c0 takes no parameters")
            return SpaceSpec.c0()
        kv = _parse_kv(body)
        if name == "lp":
            p_text = kv.get("p")
            if p_text is None:
                raise ParseError("lp needs p=")
            p = INF if p_text in ("inf", "infinity") else parse_scalar(p_text, exact=exact)
            return SpaceSpec.lp(p)
        if name == "tsirelson":
            alpha = parse_scalar(kv["alpha"], exact=exact)
            if "h" in kv:
                return SpaceSpec.tsirelson_h(alpha, _parse_h(kv["h"]))
            return SpaceSpec.tsirelson(alpha)
        if name == "orlicz":
            if "power" in kv:
                return SpaceSpec.orlicz_space(
                    classical.OrliczFunction.power(parse_scalar(kv["power"], exact=exact))
                )
            if "table" in kv:
                return SpaceSpec.orlicz_space(classical.load_orlicz_table(kv["table"]))
            raise ParseError("orlicz needs power= or table=")
        if name == "lorentz":
            w_text = kv.get("w", "harmonic")
            if w_text == "harmonic":
                w = WeightSpec.harmonic()
            else:
                raise ParseError(f"unknown lorentz weight {w_text!r}")
            return SpaceSpec.lorentz(w, parse_scalar(kv["p"], exact=exact))
    except KeyError as exc:
        raise ParseError(f"missing parameter {exc} in {descriptor!r}") from None
    except ConfigurationError as exc:
        raise ParseError(str(exc)) from None
    raise ParseError(f"unknown space {name!r}")
