"""
Preset families: projections of self-similar carpets and the Sandor family
with an exact overlap identity valid for every parameter.
"""

import re
from fractions import Fraction
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

from ..config.logging_config import get_logger
from .errors import FamilyValidationError, ParseError
from .family import AffineMapSpec, FamilySpec
from .polynomial import ParamPoly
from .rational import format_fraction, parse_fraction

logger = get_logger(__name__)

CARPET_INTERVAL = (Fraction(0), Fraction(10))
SANDOR_MAX_EPSILON = Fraction(1, 100)


def self_similar_carpet_family(base: int = 3,
                               removed: Iterable[Tuple[int, int]] = ((1, 1),),
                               weights: Optional[Sequence[Fraction]] = None,
                               interval: Tuple[Fraction, Fraction] = CARPET_INTERVAL,
                               name: Optional[str] = None) -> FamilySpec:
    """
    Slope-parametrized projections of a self-similar carpet.

    The digits (a, b) of {0..base-1}^2 minus `removed`, taken in lexicographic
    order, give maps x -> x/base + a + b*u, where u = tan(alpha). Dropping
    the common cos(alpha) factor conjugates the system by a linear map.

    Args:
        base: Grid size L of the carpet
        removed: Digits left out of the grid
        weights: Probability vector, uniform when omitted
        interval: Slope interval
        name: Family name for reports

    Returns:
        The projected family
    """
    if base < 2:
        raise FamilyValidationError(f"Carpet base must be at least 2, got {base}")
    removed = set(tuple(d) for d in removed)
    digits = [(a, b) for a in range(base) for b in range(base) if (a, b) not in removed]
    if len(digits) < 2:
        raise FamilyValidationError("A carpet needs at least two digits")

    if weights is None:
        weights = [Fraction(1, len(digits))] * len(digits)

    ratio = ParamPoly.constant(Fraction(1, base))
    maps = tuple(AffineMapSpec(ratio, ParamPoly.linear(a, b)) for a, b in digits)
    if name is None:
        name = "carpet" if base == 3 and removed == {(1, 1)} else f"carpet:base={base}"
    return FamilySpec(maps, interval, tuple(weights), base, name)


def carpet_family(interval: Tuple[Fraction, Fraction] = CARPET_INTERVAL) -> FamilySpec:
    """The 8-map Sierpinski carpet projection family with uniform weights."""
    return self_similar_carpet_family(3, ((1, 1),), None, interval, "carpet")


def sandor_interval(epsilon: Fraction, eta: Fraction) -> Tuple[Fraction, Fraction]:
    return (Fraction(1, 3) + epsilon / 3, Fraction(1, 3) + eta - epsilon)


def sandor_family(epsilon: Fraction = SANDOR_MAX_EPSILON,
                  eta: Optional[Fraction] = None) -> FamilySpec:
    """
    Three maps S_i(x) = lambda_i(u) * (x + 1) with
    (lambda_1, lambda_2, lambda_3) = (u / (1 + eps), u, u + eps).

    S_1 o S_3 o S_2 and S_2 o S_1 o S_3 coincide for every u. The parameter
    interval is [1/3 + eps/3, 1/3 + eta - eps] with eta = 4 eps / 3 + 1/1000
    unless given; eta must satisfy eps < 3 eta / 4.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= SANDOR_MAX_EPSILON:
        raise FamilyValidationError(
            f"Sandor epsilon must lie in (0, {format_fraction(SANDOR_MAX_EPSILON)}], got {epsilon}")
    if eta is None:
        eta = 4 * epsilon / 3 + Fraction(1, 1000)
    eta = Fraction(eta)
    if not epsilon < 3 * eta / 4:
        raise FamilyValidationError(f"Sandor eta={eta} too small for epsilon={epsilon}")

    lambdas = (
        ParamPoly.linear(0, 1 / (1 + epsilon)),
        ParamPoly.variable(),
        ParamPoly.linear(epsilon, 1),
    )
    maps = tuple(AffineMapSpec(lam, lam) for lam in lambdas)
    weights = (Fraction(1, 3),) * 3
    return FamilySpec(maps, sandor_interval(epsilon, eta), weights, None,
                      f"sandor:eps={format_fraction(epsilon)}")


def _carpet_from_options(options: Dict[str, str]) -> FamilySpec:
    base = int(options.pop("base", "3"))
    if options:
        raise ParseError(f"Unknown carpet options: {sorted(options)}")
    if base % 2 == 0:
        raise ParseError(f"Carpet preset needs an odd base to remove the centre, got {base}")
    if base == 3:
        return carpet_family()
    return self_similar_carpet_family(base, [(base // 2, base // 2)])


def _sandor_from_options(options: Dict[str, str]) -> FamilySpec:
    epsilon = options.pop("eps", options.pop("ε", None))
    eta = options.pop("eta", options.pop("η", None))
    if options:
        raise ParseError(f"Unknown sandor options: {sorted(options)}")
    return sandor_family(
        parse_fraction(epsilon) if epsilon is not None else SANDOR_MAX_EPSILON,
        parse_fraction(eta) if eta is not None else None,
    )


PRESETS: Dict[str, Callable[[Dict[str, str]], FamilySpec]] = {
    "carpet": _carpet_from_options,
    "sandor": _sandor_from_options,
}

PRESET_HELP = {
    "carpet": "carpet[:base=L] - projections of the self-similar carpet, slope u = tan(alpha)",
    "sandor": "sandor[:eps=p/q[,eta=p/q]] - three-map family with S_132 = S_213 for all u",
}


def is_preset(name: str) -> bool:
    return re.split(r"[:\s]", name.strip(), maxsplit=1)[0] in PRESETS


def resolve_preset(name: str) -> FamilySpec:
    """Build a preset from "carpet", "carpet:base=5", "sandor:eps=1/100" or "sandor:ε=1/100"."""
    head, _, tail = name.strip().partition(":")
    if head not in PRESETS:
        raise ParseError(f"Unknown preset {head!r}; available: {sorted(PRESETS)}")
    options = {}
    for item in filter(None, (part.strip() for part in tail.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ParseError(f"Preset option {item!r} is not key=value")
        options[key.strip()] = value.strip()
    family = PRESETS[head](options)
    logger.debug(f"Resolved preset {name!r} -> {family.name} with {family.m} maps")
    return family


def list_presets() -> Dict[str, str]:
    return dict(PRESET_HELP)
