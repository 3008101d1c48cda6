"""
Entropy-based dimension estimates d_n = H_n / (n log L).

These are finite-depth estimates only: nothing here bounds the distance
between d_n and the dimension of the limit measure.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Union

import numpy as np

from ..config.logging_config import get_logger, log_function_entry, log_function_exit
from ..ifs.errors import IFSError
from ..ifs.family import FamilySpec, similarity_dimension, weight_entropy
from .lattice import LatticeMeasure, iter_level_measures
from .sampling import BinnedMeasure, monte_carlo_binned

logger = get_logger(__name__)

Measure = Union[LatticeMeasure, BinnedMeasure]


@dataclass
class DimensionEstimate:
    depths: List[int] = field(default_factory=list)
    entropy_nats: List[float] = field(default_factory=list)
    ratio: List[float] = field(default_factory=list)
    similarity_dimension: Optional[float] = None

    def append(self, n: int, entropy: float, ratio: float):
        self.depths.append(n)
        self.entropy_nats.append(entropy)
        self.ratio.append(ratio)

    def extend(self, other: "DimensionEstimate"):
        for n, h, d in zip(other.depths, other.entropy_nats, other.ratio):
            self.append(n, h, d)

    def at(self, n: int) -> float:
        return self.ratio[self.depths.index(n)]

    def entropy_at(self, n: int) -> float:
        return self.entropy_nats[self.depths.index(n)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "depths": list(self.depths),
            "entropy_nats": list(self.entropy_nats),
            "ratio": list(self.ratio),
            "similarity_dimension": self.similarity_dimension,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DimensionEstimate":
        return cls(list(data["depths"]), list(data["entropy_nats"]), list(data["ratio"]),
                   data.get("similarity_dimension"))


def shannon_entropy(probabilities: np.ndarray) -> float:
    """-sum p log p in nats over the positive entries."""
    p = probabilities[probabilities > 0]
    return float(-(p * np.log(p)).sum())


def entropy_standard_error(measure: Measure, samples: int) -> float:
    """Standard error of the plug-in entropy of `samples` draws from `measure`."""
    p = _probabilities(measure)
    p = p[p > 0]
    log_p = np.log(p)
    variance = float((p * log_p ** 2).sum()) - float((p * log_p).sum()) ** 2
    return math.sqrt(max(variance, 0.0) / samples)


def _probabilities(measure: Measure) -> np.ndarray:
    if isinstance(measure, LatticeMeasure):
        return measure.masses()
    return np.asarray(measure.masses, dtype=np.float64)


def entropy_dimension(measure: Measure, base: int, n: int) -> DimensionEstimate:
    """
    One entry H_n, d_n = H_n / (n log base).

    Monte-Carlo histograms get the Miller-Madow correction
    (nonempty bins - 1) / (2 * samples).
    """
    if len(measure) == 0:
        raise IFSError("Entropy of an empty measure")
    p = _probabilities(measure)
    entropy = shannon_entropy(p)
    if isinstance(measure, BinnedMeasure) and measure.samples:
        nonempty = int(np.count_nonzero(p))
        entropy += (nonempty - 1) / (2 * measure.samples)

    estimate = DimensionEstimate()
    estimate.append(n, entropy, entropy / (n * math.log(base)))
    return estimate


def no_collision_entropy(family: FamilySpec, n: int) -> float:
    """n * (-sum w log w): the level-n entropy when no two words collide."""
    return n * weight_entropy(family.weights)


def dimension_profile(family: FamilySpec, u: Fraction, n_list: Iterable[int],
                      max_atoms: Optional[int] = None) -> DimensionEstimate:
    """
    Exact entropy ratios d_n for every n in n_list, with the similarity
    dimension as reference line.
    """
    wanted = sorted(set(n_list))
    log_function_entry(logger, "dimension_profile", family=family.name, u=u, depths=wanted)
    base = family.homogeneous_base
    profile = DimensionEstimate(similarity_dimension=similarity_dimension(family, u)
                                if base else None)
    if not wanted:
        return profile
    for measure in iter_level_measures(family, u, wanted[-1], max_atoms):
        if measure.level in wanted:
            profile.extend(entropy_dimension(measure, base, measure.level))
            logger.debug(f"d_{measure.level} = {profile.ratio[-1]:.6f} ({len(measure)} atoms)")
    log_function_exit(logger, "dimension_profile", profile.ratio)
    return profile


def monte_carlo_dimension_profile(family: FamilySpec, u: float, n_list: Iterable[int],
                                  samples: Optional[int] = None,
                                  seed: Optional[int] = None) -> DimensionEstimate:
    """Float-lane counterpart of dimension_profile for arbitrary real parameters."""
    base = family.homogeneous_base
    profile = DimensionEstimate(similarity_dimension=similarity_dimension(family, float(u)))
    for n in sorted(set(n_list)):
        binned = monte_carlo_binned(family, u, n, samples, seed)
        profile.extend(entropy_dimension(binned, base, n))
    return profile
