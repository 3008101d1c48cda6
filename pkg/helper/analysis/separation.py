"""
Cylinder separation statistics and the non-degeneracy rank test.

Delta_n is the minimal positive distance between level-n cylinder points.
The sequence rho_n = Delta_n^(1/n) is reported as finite-depth evidence only;
no verdict on the limiting separation condition is drawn.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple, Union

import numpy as np

from ..config.config import get_config
from ..config.logging_config import (get_logger, log_execution_time, log_function_entry,
                                     log_function_exit)
from ..ifs.errors import BudgetExceededError, HypothesisError, UnsupportedFamilyError
from ..ifs.family import FamilySpec, word_depth_limit
from ..ifs.rational import Parameter, format_fraction, parse_fraction
from ..ifs.validation import translation_rank
from ..measure.lattice import iter_level_measures

logger = get_logger(__name__)

Gap = Union[Fraction, float]


@dataclass
class SeparationProfile:
    """
    Per depth: minimal positive gap, whether two words collide, and the
    root rho_n. has_collision is only meaningful when `exact` is set.
    """
    depths: List[int] = field(default_factory=list)
    delta_n: List[Gap] = field(default_factory=list)
    has_collision: List[bool] = field(default_factory=list)
    rho_n: List[float] = field(default_factory=list)
    exact: bool = True

    def append(self, n: int, delta: Gap, collision: bool):
        self.depths.append(n)
        self.delta_n.append(delta)
        self.has_collision.append(bool(collision))
        rho = float(delta) ** (1.0 / n) if delta > 0 else 0.0
        self.rho_n.append(min(rho, 1.0))

    def first_collision(self):
        """Smallest depth with a collision, or None."""
        for n, hit in zip(self.depths, self.has_collision):
            if hit:
                return n
        return None

    def to_lines(self) -> List[str]:
        lines = []
        for n, delta, hit, rho in zip(self.depths, self.delta_n, self.has_collision, self.rho_n):
            gap = format_fraction(delta) if isinstance(delta, Fraction) else repr(delta)
            collision = str(hit).lower() if self.exact else "n/a"
            lines.append(f"n={n} delta={gap} collision={collision} rho={rho:.12g}")
        return lines

    def to_dict(self) -> Dict[str, Any]:
        return {
            "exact": self.exact,
            "depths": list(self.depths),
            "delta_n": [format_fraction(d) if isinstance(d, Fraction) else d for d in self.delta_n],
            "has_collision": list(self.has_collision),
            "rho_n": list(self.rho_n),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SeparationProfile":
        exact = data["exact"]
        deltas = [parse_fraction(d) if exact else float(d) for d in data["delta_n"]]
        return cls(list(data["depths"]), deltas, list(data["has_collision"]),
                   list(data["rho_n"]), exact)


def _min_positive_gap(sorted_values: np.ndarray):
    if len(sorted_values) < 2:
        return 0
    gaps = np.diff(sorted_values)
    gaps = gaps[gaps > 0]
    return gaps.min() if len(gaps) else 0


def _check_word_budget(m: int, n_max: int):
    budget = get_config().engine.max_level_words
    if m ** n_max > budget:
        raise BudgetExceededError(f"{m}^{n_max} cylinder points exceed {budget}",
                                  requested=n_max, feasible=word_depth_limit(m, budget))


def _exact_profile(family: FamilySpec, u: Fraction, n_max: int) -> SeparationProfile:
    engine = get_config().engine
    atoms = engine.max_atoms
    if family.m ** n_max <= engine.max_level_words:
        # m^n words bound every convolution pass
        atoms = max(atoms, engine.max_level_words)
    profile = SeparationProfile(exact=True)
    for measure in iter_level_measures(family, u, n_max, max_atoms=atoms):
        n = measure.level
        gap = _min_positive_gap(measure.offsets)
        # each word contributes one offset, so fewer atoms than words means a collision
        collision = len(measure) < family.m ** n
        profile.append(n, Fraction(int(gap), measure.lattice_denominator), collision)
    return profile


def _float_profile(family: FamilySpec, u: float, n_max: int) -> SeparationProfile:
    _check_word_budget(family.m, n_max)
    family.check_parameter(u)
    translations = np.array(family.translations_at(float(u)), dtype=np.float64)
    scale = 1.0 / family.homogeneous_base

    profile = SeparationProfile(exact=False)
    values = np.zeros(1, dtype=np.float64)
    for n in range(1, n_max + 1):
        values = (values[:, None] + translations[None, :] * scale ** (n - 1)).ravel()
        # equal floats are not evidence of an exact overlap
        profile.append(n, float(_min_positive_gap(np.sort(values))), False)
    return profile


@log_execution_time()
def separation_profile(family: FamilySpec, u: Parameter, n_max: int) -> SeparationProfile:
    """
    Delta_n, collision flags and rho_n for n = 1..n_max.

    Rational u uses the exact lattice path; float u enumerates all m^n
    cylinder points in double precision.
    """
    if not family.is_homogeneous:
        raise UnsupportedFamilyError("Separation profiles need a homogeneous family")
    log_function_entry(logger, "separation_profile", family=family.name, u=u, n_max=n_max)
    if isinstance(u, float):
        profile = _float_profile(family, u, n_max)
    else:
        profile = _exact_profile(family, Fraction(u), n_max)
    log_function_exit(logger, "separation_profile", profile.rho_n)
    return profile


class NonDegeneracyResult(NamedTuple):
    rank: int
    passes: bool


def nondegeneracy_rank(family: FamilySpec) -> NonDegeneracyResult:
    """
    Rank over Q of the translation coefficient matrix; passing (rank = m)
    certifies the non-degeneracy condition for homogeneous families with
    contraction 1/L < 1/2.
    """
    if not family.is_homogeneous:
        raise UnsupportedFamilyError(f"{family.name} is not homogeneous")
    if family.homogeneous_base < 3:
        raise HypothesisError(
            f"Rank criterion needs ratio 1/L < 1/2; {family.name} has L={family.homogeneous_base}")
    rank = translation_rank(family)
    return NonDegeneracyResult(rank, rank == family.m)
