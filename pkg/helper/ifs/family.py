"""
One-parameter families of affine contractions on the line.

A family is m maps phi_i(x) = r_i(u) * x + t_i(u) whose ratio and translation
are polynomials in the parameter u, together with a parameter interval and a
probability weight vector. Everything here is immutable and exact.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

from ..config.config import get_config
from ..config.logging_config import get_logger
from .errors import FamilyValidationError
from .polynomial import ParamPoly
from .rational import Parameter, format_fraction

logger = get_logger(__name__)


@dataclass(frozen=True)
class AffineMapSpec:
    """x -> ratio(u) * x + translation(u)."""
    ratio: ParamPoly
    translation: ParamPoly

    def at(self, u: Parameter) -> Tuple[Parameter, Parameter]:
        """(ratio, translation) evaluated at u."""
        return self.ratio(u), self.translation(u)


def compose(a: AffineMapSpec, b: AffineMapSpec) -> AffineMapSpec:
    """Spec of a o b: ratio a.r * b.r, translation a.r * b.t + a.t."""
    return AffineMapSpec(
        ratio=a.ratio * b.ratio,
        translation=a.ratio * b.translation + a.translation,
    )


@dataclass(frozen=True)
class Word:
    """Finite sequence of map indices, 1-based."""
    symbols: Tuple[int, ...]

    def __post_init__(self):
        symbols = tuple(int(s) for s in self.symbols)
        if not symbols:
            raise FamilyValidationError("A word needs at least one symbol")
        if any(s < 1 for s in symbols):
            raise FamilyValidationError(f"Word symbols start at 1: {symbols}")
        object.__setattr__(self, "symbols", symbols)

    @classmethod
    def of(cls, *symbols: int) -> "Word":
        return cls(tuple(symbols))

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse the dot-separated rendering "3.1.7"."""
        try:
            return cls(tuple(int(part) for part in text.strip().split(".")))
        except ValueError as e:
            raise FamilyValidationError(f"Malformed word: {text!r}") from e

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __str__(self) -> str:
        return ".".join(str(s) for s in self.symbols)


class CylinderPoint(NamedTuple):
    """phi_w(0) and the bound on its distance to any point of the cylinder."""
    value: Parameter
    error_bound: Parameter


def _ratio_grid(lower: Fraction, upper: Fraction, points: int) -> Iterable[Fraction]:
    step = (upper - lower) / points
    return (lower + k * step for k in range(points + 1))


@dataclass(frozen=True)
class FamilySpec:
    """A one-parameter IFS family with its weight vector.

    homogeneous_base is L when every ratio is the constant polynomial 1/L; it
    is detected automatically when omitted.
    """
    maps: Tuple[AffineMapSpec, ...]
    interval: Tuple[Fraction, Fraction]
    weights: Tuple[Fraction, ...]
    homogeneous_base: Optional[int] = None
    name: str = "custom"

    def __post_init__(self):
        maps = tuple(self.maps)
        weights = tuple(Fraction(w) for w in self.weights)
        lower, upper = (Fraction(x) for x in self.interval)
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "interval", (lower, upper))

        if len(maps) < 2:
            raise FamilyValidationError(f"A family needs at least 2 maps, got {len(maps)}")
        if len(weights) != len(maps):
            raise FamilyValidationError(
                f"{len(weights)} weights given for {len(maps)} maps")
        if any(w <= 0 for w in weights):
            raise FamilyValidationError("Weights must be strictly positive")
        if sum(weights) != 1:
            raise FamilyValidationError(f"Weights sum to {sum(weights)}, not 1")
        if not lower < upper:
            raise FamilyValidationError(f"Empty parameter interval [{lower}, {upper}]")

        detected = self._detect_base()
        if self.homogeneous_base is None:
            object.__setattr__(self, "homogeneous_base", detected)
        elif detected != self.homogeneous_base:
            raise FamilyValidationError(
                f"Declared base {self.homogeneous_base} but ratios are not all "
                f"1/{self.homogeneous_base}")

        self._check_ratios()

    def _detect_base(self) -> Optional[int]:
        ratios = {m.ratio for m in self.maps}
        if len(ratios) != 1:
            return None
        ratio = next(iter(ratios))
        if not ratio.is_constant():
            return None
        value = ratio.constant_value()
        if value > 0 and value.numerator == 1 and value.denominator >= 2:
            return value.denominator
        return None

    def _check_ratios(self):
        if self.homogeneous_base is not None:
            return
        lower, upper = self.interval
        points = get_config().engine.ratio_check_grid
        for u in _ratio_grid(lower, upper, points):
            for index, spec in enumerate(self.maps, start=1):
                r = spec.ratio(u)
                if not 0 < abs(r) < 1:
                    raise FamilyValidationError(
                        f"Map {index} has degenerate ratio {r} at u={format_fraction(u)}")

    @property
    def m(self) -> int:
        return len(self.maps)

    @property
    def is_homogeneous(self) -> bool:
        return self.homogeneous_base is not None

    def contains(self, u: Parameter) -> bool:
        lower, upper = self.interval
        return lower <= u <= upper

    def check_parameter(self, u: Parameter) -> None:
        if not self.contains(u):
            lower, upper = self.interval
            raise FamilyValidationError(
                f"Parameter {u} outside [{format_fraction(lower)}, {format_fraction(upper)}]")

    def check_word(self, word: Word) -> None:
        bad = [s for s in word.symbols if s > self.m]
        if bad:
            raise FamilyValidationError(
                f"Word {word} uses symbols {bad} outside 1..{self.m}")

    def ratios_at(self, u: Parameter) -> Tuple[Parameter, ...]:
        return tuple(spec.ratio(u) for spec in self.maps)

    def translations_at(self, u: Parameter) -> Tuple[Parameter, ...]:
        return tuple(spec.translation(u) for spec in self.maps)

    def max_degree(self) -> int:
        return max(spec.translation.degree for spec in self.maps)

    def with_weights(self, weights: Sequence[Fraction]) -> "FamilySpec":
        return FamilySpec(self.maps, self.interval, tuple(weights), None, self.name)


def word_depth_limit(m: int, budget: int) -> int:
    """Largest n with m^n <= budget, in integer arithmetic (0 if none)."""
    n = 0
    while n < 256 and m ** (n + 1) <= budget:
        n += 1
    return n


def compose_word(family: FamilySpec, word: Word) -> AffineMapSpec:
    """phi_{i_1} o ... o phi_{i_n} as a polynomial map spec."""
    family.check_word(word)
    result = family.maps[word.symbols[0] - 1]
    for symbol in word.symbols[1:]:
        result = compose(result, family.maps[symbol - 1])
    return result


def support_bound(family: FamilySpec, u: Parameter) -> Parameter:
    """xi = t_max / (1 - r_max); the attractor lies in (-xi, xi)."""
    t_max = max(abs(t) for t in family.translations_at(u))
    r_max = max(abs(r) for r in family.ratios_at(u))
    if not r_max < 1:
        raise FamilyValidationError(f"Maximal ratio {r_max} is not contracting at u={u}")
    return t_max / (1 - r_max)


def cylinder_point(family: FamilySpec, word: Word, u: Parameter) -> CylinderPoint:
    """phi_w(0) at u, exact for rational u, with error bound xi * r_max^|w|."""
    family.check_word(word)
    family.check_parameter(u)
    ratios = family.ratios_at(u)
    translations = family.translations_at(u)

    value = Fraction(0) if not isinstance(u, float) else 0.0
    for symbol in reversed(word.symbols):
        value = ratios[symbol - 1] * value + translations[symbol - 1]

    r_max = max(abs(r) for r in ratios)
    return CylinderPoint(value, support_bound(family, u) * r_max ** len(word))


def _checked_ratios(family: FamilySpec, u: Parameter) -> Tuple[float, ...]:
    ratios = tuple(abs(float(r)) for r in family.ratios_at(u))
    for index, r in enumerate(ratios, start=1):
        if not 0 < r < 1:
            raise FamilyValidationError(f"Map {index} has degenerate ratio {r} at u={u}")
    return ratios


def weight_entropy(weights: Sequence[Fraction]) -> float:
    """-sum w log w in nats."""
    return -math.fsum(float(w) * math.log(w) for w in weights)


def similarity_dimension(family: FamilySpec, u: Parameter) -> float:
    """(sum w_i log w_i) / (sum w_i log |r_i(u)|)."""
    ratios = _checked_ratios(family, u)
    if family.is_homogeneous:
        return weight_entropy(family.weights) / math.log(family.homogeneous_base)
    numerator = math.fsum(float(w) * math.log(w) for w in family.weights)
    denominator = math.fsum(float(w) * math.log(r) for w, r in zip(family.weights, ratios))
    return numerator / denominator


def attractor_similarity_dimension(family: FamilySpec, u: Parameter,
                                   tol: float = 1e-12) -> float:
    """The s >= 0 solving sum |r_i(u)|^s = 1, by bisection."""
    ratios = _checked_ratios(family, u)

    def pressure(s: float) -> float:
        return math.fsum(r ** s for r in ratios) - 1.0

    low, high = 0.0, 1.0
    while pressure(high) > 0:
        low, high = high, 2 * high
    while high - low > tol:
        mid = 0.5 * (low + high)
        if pressure(mid) > 0:
            low = mid
        else:
            high = mid
    return 0.5 * (low + high)
