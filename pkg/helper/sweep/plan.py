"""
Sweep plans and parameter enumeration.

Rational slopes come from a Stern-Brocot traversal (Farey sequence of order
Q_max restricted to the interval); float parameters from a uniform grid.
The two lanes stay separately tagged all the way into the reports.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import FrozenSet, Iterator, List, Optional, Tuple, Union

import numpy as np

from ..config.config import get_config
from ..config.logging_config import get_logger
from ..ifs.errors import FamilyValidationError, ParseError
from ..ifs.family import FamilySpec
from ..ifs.family_io import load_family, parse_structured_text
from ..ifs.rational import Parameter, parse_fraction

logger = get_logger(__name__)

METRICS = ("similarity_dim", "separation", "overlaps", "entropy", "phi_probe", "criterion")

RATIONAL = "rational"
FLOAT = "float"


def _mediants(left: Fraction, right: Fraction, q_max: int,
              lower: Fraction, upper: Fraction) -> Iterator[Fraction]:
    """In-order Stern-Brocot descendants strictly between left and right."""
    stack: List[Tuple[Fraction, Fraction, bool]] = [(left, right, False)]
    while stack:
        a, b, emit = stack.pop()
        if emit:
            yield a
            continue
        q = a.denominator + b.denominator
        if q > q_max or b <= lower or a >= upper:
            continue
        mediant = Fraction(a.numerator + b.numerator, q)
        # right subtree pushed first so the left one is visited first
        stack.append((mediant, b, False))
        stack.append((mediant, None, True))
        stack.append((a, mediant, False))


def farey_slopes(interval: Tuple[Fraction, Fraction], q_max: int) -> List[Fraction]:
    """
    All reduced p/q with q <= q_max inside the closed interval, ascending.

    Args:
        interval: Closed interval (lower, upper)
        q_max: Largest denominator

    Returns:
        Strictly increasing list of Fractions
    """
    if q_max < 1:
        raise FamilyValidationError(f"Q_max must be at least 1, got {q_max}")
    lower, upper = (Fraction(x) for x in interval)
    if lower > upper:
        raise FamilyValidationError(f"Empty interval [{lower}, {upper}]")

    slopes: List[Fraction] = []
    for k in range(math.floor(lower), math.ceil(upper)):
        left = Fraction(k)
        if lower <= left:
            slopes.append(left)
        slopes.extend(x for x in _mediants(left, Fraction(k + 1), q_max, lower, upper)
                      if lower <= x <= upper)
    if upper.denominator == 1:
        slopes.append(upper)
    return slopes


@dataclass
class SweepPlan:
    """What to compute, where, and with how many workers."""
    family: Union[str, FamilySpec] = "carpet"
    rational_slopes: Optional[int] = None
    float_grid: int = 0
    depths: List[int] = field(default_factory=lambda: list(get_config().sweep.depths))
    metrics: FrozenSet[str] = frozenset(METRICS)
    parallelism: int = field(default_factory=lambda: get_config().sweep.jobs)
    seed: int = field(default_factory=lambda: get_config().monte_carlo.seed)
    interval: Optional[Tuple[Fraction, Fraction]] = None
    samples: Optional[int] = None
    timeout_seconds: float = field(default_factory=lambda: get_config().sweep.timeout_seconds)

    def __post_init__(self):
        self.metrics = frozenset(self.metrics)
        unknown = self.metrics - set(METRICS)
        if unknown:
            raise FamilyValidationError(f"Unknown metrics {sorted(unknown)}; choose from {METRICS}")
        if not self.rational_slopes and not self.float_grid:
            raise FamilyValidationError("A sweep needs rational slopes or a float grid")
        if self.parallelism < 1:
            raise FamilyValidationError(f"Parallelism must be positive, got {self.parallelism}")
        self.depths = sorted(set(int(n) for n in self.depths))
        if not self.depths or self.depths[0] < 1:
            raise FamilyValidationError(f"Depths must be positive, got {self.depths}")

    def resolve_family(self) -> FamilySpec:
        if isinstance(self.family, FamilySpec):
            return self.family
        return load_family(self.family)

    def parameter_interval(self, family: FamilySpec) -> Tuple[Fraction, Fraction]:
        if self.interval is None:
            return family.interval
        lower, upper = self.interval
        if not (family.contains(lower) and family.contains(upper)):
            raise FamilyValidationError(
                f"Sweep interval [{lower}, {upper}] leaves the family interval {family.interval}")
        return self.interval

    def parameters(self, family: FamilySpec) -> List[Tuple[Parameter, str]]:
        """Tagged parameters ordered by value, rational before float on ties."""
        lower, upper = self.parameter_interval(family)
        tagged: List[Tuple[Parameter, str]] = []
        if self.rational_slopes:
            tagged.extend((u, RATIONAL) for u in farey_slopes((lower, upper), self.rational_slopes))
        if self.float_grid:
            grid = np.linspace(float(lower), float(upper), self.float_grid)
            tagged.extend((float(u), FLOAT) for u in grid)
        tagged.sort(key=lambda item: (float(item[0]), item[1] != RATIONAL))
        return tagged


def plan_from_text(text: str) -> SweepPlan:
    """Parse a plan file written in the family key = value format."""
    entries = parse_structured_text(text)

    def scalar(key: str, default=None):
        value = entries.get(key, default)
        if isinstance(value, list):
            raise ParseError(f"{key!r} must be a scalar")
        return value

    def int_list(key: str) -> Optional[List[int]]:
        value = entries.get(key)
        if value is None:
            return None
        if not isinstance(value, list):
            value = [value]
        return [int(v) for v in value]

    kwargs = {"family": scalar("family", "carpet")}
    if "qmax" in entries:
        kwargs["rational_slopes"] = int(scalar("qmax"))
    if "grid" in entries:
        kwargs["float_grid"] = int(scalar("grid"))
    if "depths" in entries:
        kwargs["depths"] = int_list("depths")
    if "metrics" in entries:
        metrics = entries["metrics"]
        kwargs["metrics"] = frozenset(metrics if isinstance(metrics, list) else
                                      [m.strip() for m in metrics.split(",") if m.strip()])
    if "jobs" in entries:
        kwargs["parallelism"] = int(scalar("jobs"))
    if "seed" in entries:
        kwargs["seed"] = int(scalar("seed"))
    if "samples" in entries:
        kwargs["samples"] = int(scalar("samples"))
    if "timeout" in entries:
        kwargs["timeout_seconds"] = float(scalar("timeout"))
    if "interval" in entries:
        bounds = entries["interval"]
        if not isinstance(bounds, list) or len(bounds) != 2:
            raise ParseError("interval needs two endpoints")
        kwargs["interval"] = (parse_fraction(bounds[0]), parse_fraction(bounds[1]))
    try:
        return SweepPlan(**kwargs)
    except ValueError as e:
        raise ParseError(f"Invalid plan: {e}") from e


def load_plan(path: str) -> SweepPlan:
    logger.info(f"Loading sweep plan from {path}")
    return plan_from_text(Path(path).read_text(encoding="utf-8"))
