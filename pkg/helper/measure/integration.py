"""
Integrals of piecewise-linear test functions against lattice measures, and
the parameter-continuity probe u -> Phi_f(u) = integral of f d nu_u.
"""

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

import numpy as np

from ..config.config import get_config
from ..config.logging_config import get_logger, log_function_entry, log_function_exit
from ..ifs.errors import FamilyValidationError
from ..ifs.family import FamilySpec, support_bound
from ..ifs.rational import Parameter
from .lattice import LatticeMeasure, exact_level_measure

logger = get_logger(__name__)


@dataclass(frozen=True)
class PiecewiseLinear:
    """Linear interpolation through (knots, values), constant beyond the end knots."""
    knots: Tuple[Fraction, ...]
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        knots = tuple(Fraction(k) for k in self.knots)
        values = tuple(Fraction(v) for v in self.values)
        if not knots or len(knots) != len(values):
            raise FamilyValidationError("Test function needs matching, nonempty knots and values")
        if any(b <= a for a, b in zip(knots, knots[1:])):
            raise FamilyValidationError("Test function knots must increase strictly")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, value: Parameter = 1) -> "PiecewiseLinear":
        return cls((Fraction(0),), (Fraction(value),))

    @classmethod
    def identity(cls, lower: Parameter, upper: Parameter) -> "PiecewiseLinear":
        return cls((lower, upper), (lower, upper))

    @classmethod
    def hat(cls, center: Parameter, half_width: Parameter, peak: Parameter = 1) -> "PiecewiseLinear":
        center, half_width = Fraction(center), Fraction(half_width)
        return cls((center - half_width, center, center + half_width), (0, peak, 0))

    @property
    def lipschitz_constant(self) -> Fraction:
        slopes = [abs((v2 - v1) / (k2 - k1)) for k1, k2, v1, v2 in
                  zip(self.knots, self.knots[1:], self.values, self.values[1:])]
        return max(slopes, default=Fraction(0))

    def __call__(self, x: Fraction) -> Fraction:
        x = Fraction(x)
        if x <= self.knots[0]:
            return self.values[0]
        if x >= self.knots[-1]:
            return self.values[-1]
        i = bisect.bisect_right(self.knots, x)
        k1, k2 = self.knots[i - 1], self.knots[i]
        v1, v2 = self.values[i - 1], self.values[i]
        return v1 + (v2 - v1) * (x - k1) / (k2 - k1)

    def evaluate(self, xs: np.ndarray) -> np.ndarray:
        return np.interp(xs, [float(k) for k in self.knots], [float(v) for v in self.values])


def hat_function(center: Parameter, half_width: Parameter, peak: Parameter = 1) -> PiecewiseLinear:
    return PiecewiseLinear.hat(center, half_width, peak)


def integrate_test_function(measure: LatticeMeasure, fn: PiecewiseLinear,
                            exact: bool = False) -> Union[float, Fraction]:
    """
    sum over atoms of mass * fn(position).

    With exact=True the sum is carried out in Fractions (small measures only).
    """
    if exact:
        return sum((Fraction(int(w), measure.mass_denominator) * fn(measure.position(k))
                    for k, w in zip(measure.offsets, measure.mass_numerators)), Fraction(0))
    return float(np.dot(measure.masses(), fn.evaluate(measure.positions())))


def max_translation_speed(family: FamilySpec) -> Fraction:
    """max_i sup over the interval grid of |dt_i/du|."""
    points = get_config().engine.ratio_check_grid
    return max(spec.translation.derivative().sup_abs_on(family.interval, points)
               for spec in family.maps)


def lipschitz_bound(family: FamilySpec, u: Fraction, u_other: Fraction, n: int,
                    fn: PiecewiseLinear) -> float:
    """
    Bound on |Phi_f(u) - Phi_f(u')| for level-n measures:
    K * max|t'| * L/(L-1) * |u - u'| + 2 K xi L^-n.
    """
    base = family.homogeneous_base
    k = fn.lipschitz_constant
    xi = max(support_bound(family, u), support_bound(family, u_other))
    drift = k * max_translation_speed(family) * Fraction(base, base - 1) * abs(u - u_other)
    return float(drift + 2 * k * xi * Fraction(1, base ** n))


def phi_probe(family: FamilySpec, u_grid: Sequence[Fraction], n: int,
              fn: PiecewiseLinear) -> List[float]:
    """Phi_f on a parameter grid, each value from the exact level-n measure."""
    log_function_entry(logger, "phi_probe", family=family.name, points=len(u_grid), n=n)
    values = [integrate_test_function(exact_level_measure(family, u, n), fn) for u in u_grid]
    log_function_exit(logger, "phi_probe", f"{len(values)} values")
    return values
