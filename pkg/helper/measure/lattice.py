"""
Exact level-n discretizations of projected self-similar measures.

For a homogeneous family with base L at a rational parameter u, every
translation t_i(u) is d_i / q for integers d_i and the common denominator q.
The level-n cylinder points are then k / D with D = q * L**(n-1) and integer
offsets k = sum_k d_{i_k} L**(n-k), built by the recurrence
V_n = L * V_{n-1} + d_{i_n}. Each pass is a sparse convolution: the m shifted
copies are sorted runs, merged by a stable sort and collapsed by exact
integer addition of mass numerators.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..config.config import get_config
from ..config.logging_config import (get_logger, log_execution_time, log_function_entry,
                                     log_function_exit)
from ..ifs.errors import BudgetExceededError, FamilyValidationError, UnsupportedFamilyError
from ..ifs.family import FamilySpec, Word, cylinder_point, word_depth_limit
from ..ifs.rational import common_denominator

logger = get_logger(__name__)

INT64_SAFE = 2 ** 62


@dataclass(frozen=True, eq=False)
class LatticeMeasure:
    """
    Atoms at positions offsets / lattice_denominator with exact masses
    mass_numerators / mass_denominator. Offsets are sorted and unique.
    """
    level: int
    base: int
    lattice_denominator: int
    offsets: np.ndarray
    mass_numerators: np.ndarray
    mass_denominator: int

    def __len__(self) -> int:
        return len(self.offsets)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeMeasure):
            return NotImplemented
        return (
            self.level == other.level
            and self.base == other.base
            and self.lattice_denominator == other.lattice_denominator
            and self.atoms() == other.atoms()
        )

    def atoms(self) -> Dict[int, Fraction]:
        """Offset -> exact mass."""
        return {
            int(k): Fraction(int(w), self.mass_denominator)
            for k, w in zip(self.offsets, self.mass_numerators)
        }

    def total_mass(self) -> Fraction:
        return Fraction(int(sum(int(w) for w in self.mass_numerators)), self.mass_denominator)

    def position(self, offset: int) -> Fraction:
        return Fraction(int(offset), self.lattice_denominator)

    def positions(self) -> np.ndarray:
        """Atom positions as floats."""
        if self.offsets.dtype == object:
            return np.array([int(k) / self.lattice_denominator for k in self.offsets], dtype=float)
        return self.offsets.astype(float) / float(self.lattice_denominator)

    def masses(self) -> np.ndarray:
        """Atom masses as floats."""
        if self.mass_numerators.dtype == object:
            return np.array([int(w) / self.mass_denominator for w in self.mass_numerators],
                            dtype=float)
        return self.mass_numerators.astype(float) / float(self.mass_denominator)


def lattice_digits(family: FamilySpec, u: Fraction) -> Tuple[List[int], int]:
    """Integer digits d_i and common denominator q with t_i(u) = d_i / q."""
    if not family.is_homogeneous:
        raise UnsupportedFamilyError(
            f"Lattice measures need a homogeneous family; {family.name} has varying ratios")
    if isinstance(u, float):
        raise FamilyValidationError("Lattice measures need a rational parameter")
    u = Fraction(u)
    family.check_parameter(u)
    translations = family.translations_at(u)
    q = common_denominator(translations)
    return [int(t * q) for t in translations], q


def weight_numerators(family: FamilySpec) -> Tuple[List[int], int]:
    """Integer numerators of the weights over their lcm denominator."""
    denominator = common_denominator(family.weights)
    return [int(w * denominator) for w in family.weights], denominator


def support_size_bound(digits: Sequence[int], base: int, m: int, n: int) -> int:
    """Upper bound on the number of distinct level-n offsets."""
    spread = max(digits) - min(digits)
    lattice_points = spread * (base ** n - 1) // (base - 1) + 1
    return min(m ** n, lattice_points)


def _pass_size(digits: Sequence[int], base: int, m: int, n: int) -> int:
    # pass n materializes m shifted copies of the level n-1 support before merging
    return support_size_bound(digits, base, m, n - 1) * m


def feasible_depth(digits: Sequence[int], base: int, m: int, budget: int) -> int:
    """Largest depth whose final convolution pass fits the budget (0 if none)."""
    n = 0
    while n < 256 and _pass_size(digits, base, m, n + 1) <= budget:
        n += 1
    return n


def _check_budget(digits: Sequence[int], base: int, m: int, n: int, budget: int):
    if _pass_size(digits, base, m, n) > budget:
        raise BudgetExceededError(
            f"Level-{n} measure needs more than {budget} atoms",
            requested=n, feasible=feasible_depth(digits, base, m, budget))


def _array(values: Sequence[int], bound: int) -> np.ndarray:
    return np.array(values, dtype=np.int64 if bound < INT64_SAFE else object)


def merge_sorted_atoms(offsets: np.ndarray, masses: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Collapse equal neighbouring offsets of a sorted array, adding masses."""
    if len(offsets) == 0:
        return offsets, masses
    boundary = np.empty(len(offsets), dtype=bool)
    boundary[0] = True
    np.not_equal(offsets[1:], offsets[:-1], out=boundary[1:])
    starts = np.flatnonzero(boundary)
    return offsets[starts], np.add.reduceat(masses, starts)


def convolve_digits(offsets: np.ndarray, masses: np.ndarray, digits: Sequence[int],
                    weights: Sequence[int], base: int) -> Tuple[np.ndarray, np.ndarray]:
    """One pass of V -> base * V + d with mass multiplied by the digit weight."""
    shifted = offsets * base
    all_offsets = np.concatenate([shifted + d for d in digits])
    all_masses = np.concatenate([masses * w for w in weights])
    # each shifted copy is already sorted, stable sort merges the runs
    order = np.argsort(all_offsets, kind="stable")
    return merge_sorted_atoms(all_offsets[order], all_masses[order])


def iter_level_measures(family: FamilySpec, u: Fraction, n_max: int,
                        max_atoms: Optional[int] = None) -> Iterator[LatticeMeasure]:
    """Yield the exact level-n measures for n = 1..n_max."""
    if n_max < 1:
        raise FamilyValidationError(f"Depth must be at least 1, got {n_max}")
    budget = max_atoms or get_config().engine.max_atoms
    digits, q = lattice_digits(family, u)
    numerators, denominator = weight_numerators(family)
    base, m = family.homogeneous_base, family.m
    _check_budget(digits, base, m, n_max, budget)

    offset_bound = (max(abs(d) for d in digits) + 1) * base ** n_max
    mass_bound = denominator ** n_max
    offsets = _array([0], offset_bound)
    masses = _array([1], mass_bound)
    digit_arr = [int(d) for d in digits]
    weight_arr = [int(w) for w in numerators]

    for n in range(1, n_max + 1):
        offsets, masses = convolve_digits(offsets, masses, digit_arr, weight_arr, base)
        yield LatticeMeasure(
            level=n,
            base=base,
            lattice_denominator=q * base ** (n - 1),
            offsets=offsets,
            mass_numerators=masses,
            mass_denominator=denominator ** n,
        )


@log_execution_time()
def exact_level_measure(family: FamilySpec, u: Fraction, n: int,
                        max_atoms: Optional[int] = None) -> LatticeMeasure:
    """
    The law of sum_{k=1}^n t_{i_k}(u) L^{-(k-1)} under the weight product measure.

    Args:
        family: Homogeneous family
        u: Rational parameter inside the family interval
        n: Depth
        max_atoms: Override of the configured atom budget

    Returns:
        Exact LatticeMeasure with total mass exactly 1
    """
    log_function_entry(logger, "exact_level_measure", family=family.name, u=u, n=n)
    measure = None
    for measure in iter_level_measures(family, u, n, max_atoms):
        pass
    log_function_exit(logger, "exact_level_measure", f"{len(measure)} atoms")
    return measure


def brute_force_measure(family: FamilySpec, u: Fraction, n: int) -> LatticeMeasure:
    """
    Oracle: enumerate all m^n words, group exact cylinder points, sum weights.

    Same representation as exact_level_measure; limited to n <= 6 and m^n <= 10^6.
    """
    engine = get_config().engine
    if n < 1 or n > engine.brute_force_max_depth or family.m ** n > engine.brute_force_max_words:
        raise BudgetExceededError(
            f"Brute force over {family.m}^{n} words is out of range",
            requested=n,
            feasible=min(engine.brute_force_max_depth,
                         word_depth_limit(family.m, engine.brute_force_max_words)))
    log_function_entry(logger, "brute_force_measure", family=family.name, u=u, n=n)
    _, q = lattice_digits(family, u)
    base = family.homogeneous_base
    scale = q * base ** (n - 1)
    mass_denominator = common_denominator(family.weights) ** n

    grouped: Dict[int, Fraction] = {}
    for symbols in itertools.product(range(1, family.m + 1), repeat=n):
        value = cylinder_point(family, Word(symbols), u).value * scale
        if value.denominator != 1:
            raise ArithmeticError(f"Cylinder point of {symbols} is off the lattice 1/{scale}")
        mass = math.prod((family.weights[s - 1] for s in symbols), start=Fraction(1))
        key = value.numerator
        grouped[key] = grouped.get(key, Fraction(0)) + mass

    keys = sorted(grouped)
    numerators = [int(grouped[k] * mass_denominator) for k in keys]
    log_function_exit(logger, "brute_force_measure", f"{len(keys)} atoms")
    return LatticeMeasure(
        level=n,
        base=base,
        lattice_denominator=scale,
        offsets=_array(keys, max((abs(k) for k in keys), default=0) + 1),
        mass_numerators=_array(numerators, mass_denominator + 1),
        mass_denominator=mass_denominator,
    )
