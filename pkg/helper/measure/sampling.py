"""
Float-mode discretizations: Monte-Carlo sampling of cylinder points and
binning onto a uniform grid.

Random words come from a multiply-with-carry generator run as K independent
lanes so it vectorizes with numpy while staying reproducible across
platforms:

    lane keys   k_j = splitmix64(seed + j * 0x9E3779B97F4A7C15), j = 1..K
    lane state  x_j = k_j mod 2**32,  c_j = (k_j >> 32) mod (A - 2) + 1
    step        t = A * x + c;  x = t mod 2**32;  c = t >> 32
    output      step-major: all K lanes of step 0, then step 1, ...

with A = 4294957665. Each 32-bit output x gives the uniform x / 2**32.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config.config import get_config
from ..config.logging_config import get_logger, log_execution_time, log_function_entry
from ..ifs.errors import UnsupportedFamilyError
from ..ifs.family import FamilySpec
from .lattice import LatticeMeasure

logger = get_logger(__name__)

MWC_MULTIPLIER = 4294957665
_MASK32 = np.uint64(0xFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_CHUNK = 1 << 18


def splitmix64(values: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    z = values.astype(np.uint64) + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


class MultiplyWithCarry:
    """K-lane 32-bit multiply-with-carry generator."""

    def __init__(self, seed: int, lanes: Optional[int] = None):
        lanes = lanes or get_config().monte_carlo.lanes
        index = np.arange(1, lanes + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            keys = splitmix64(np.uint64(seed % 2 ** 64) + index * _GOLDEN)
        self.lanes = lanes
        self._x = keys & _MASK32
        self._c = (keys >> np.uint64(32)) % np.uint64(MWC_MULTIPLIER - 2) + np.uint64(1)
        self._a = np.uint64(MWC_MULTIPLIER)

    def next_uint32(self, count: int) -> np.ndarray:
        steps = -(-count // self.lanes)
        out = np.empty((steps, self.lanes), dtype=np.uint64)
        x, c, a = self._x, self._c, self._a
        for step in range(steps):
            t = a * x + c
            x = t & _MASK32
            c = t >> np.uint64(32)
            out[step] = x
        self._x, self._c = x, c
        return out.ravel()[:count]

    def uniform(self, count: int) -> np.ndarray:
        return self.next_uint32(count).astype(np.float64) / 4294967296.0


@dataclass(frozen=True, eq=False)
class BinnedMeasure:
    """
    Sparse float histogram: mass masses[j] on the bin centred at
    origin + bin_indices[j] * bin_width. `samples` is set for Monte-Carlo
    estimates and None for binned exact measures.
    """
    bin_width: float
    origin: float
    bin_indices: np.ndarray
    masses: np.ndarray
    samples: Optional[int] = None

    def __len__(self) -> int:
        return len(self.masses)

    def total_mass(self) -> float:
        return float(self.masses.sum())

    def same_bins(self, other: "BinnedMeasure") -> bool:
        return (self.bin_width == other.bin_width and self.origin == other.origin
                and np.array_equal(self.bin_indices, other.bin_indices)
                and np.array_equal(self.masses, other.masses))


def default_bin_width(base: int, n: int) -> float:
    """L^-n scaled by L: the level-n spacing of cylinder points for integer translations."""
    return float(base) ** -(n - 1)


def _bin_indices(positions: np.ndarray, bin_width: float, origin: float) -> np.ndarray:
    return np.floor((positions - origin) / bin_width + 0.5).astype(np.int64)


def bin_lattice_measure(measure: LatticeMeasure, bin_width: Optional[float] = None,
                        origin: float = 0.0) -> BinnedMeasure:
    """Bin an exact measure onto the same grid the Monte-Carlo estimator uses."""
    if bin_width is None:
        bin_width = default_bin_width(measure.base, measure.level)
    indices, inverse = np.unique(_bin_indices(measure.positions(), bin_width, origin),
                                 return_inverse=True)
    masses = np.bincount(inverse.ravel(), weights=measure.masses(), minlength=len(indices))
    return BinnedMeasure(bin_width, origin, indices, masses)


def sample_cylinder_points(family: FamilySpec, u: float, n: int, samples: int,
                           seed: int) -> np.ndarray:
    """Float cylinder points of `samples` random words of length n."""
    if not family.is_homogeneous:
        raise UnsupportedFamilyError("Monte-Carlo binning needs a homogeneous family")
    u = float(u)
    family.check_parameter(u)
    translations = np.array(family.translations_at(u), dtype=np.float64)
    cumulative = np.cumsum([float(w) for w in family.weights])
    cumulative[-1] = 1.0
    powers = float(family.homogeneous_base) ** -np.arange(n, dtype=np.float64)

    generator = MultiplyWithCarry(seed)
    points = np.empty(samples, dtype=np.float64)
    for start in range(0, samples, _CHUNK):
        size = min(_CHUNK, samples - start)
        uniforms = generator.uniform(size * n).reshape(size, n)
        symbols = np.minimum(np.searchsorted(cumulative, uniforms, side="right"), family.m - 1)
        points[start:start + size] = translations[symbols] @ powers
    return points


@log_execution_time()
def monte_carlo_binned(family: FamilySpec, u: float, n: int, samples: Optional[int] = None,
                       seed: Optional[int] = None, bin_width: Optional[float] = None,
                       origin: float = 0.0) -> BinnedMeasure:
    """
    Histogram of cylinder points of i.i.d. random words of length n.

    Args:
        family: Homogeneous family
        u: Parameter (any real inside the interval)
        n: Word length
        samples: Number of words (configured default 10^6)
        seed: Generator seed (configured default 42)
        bin_width: Defaults to L^-(n-1)
        origin: Grid origin

    Returns:
        BinnedMeasure with bitwise reproducible masses for a fixed seed
    """
    mc = get_config().monte_carlo
    samples = samples or mc.samples
    seed = mc.seed if seed is None else seed
    log_function_entry(logger, "monte_carlo_binned", family=family.name, u=u, n=n,
                       samples=samples, seed=seed)
    if bin_width is None:
        bin_width = default_bin_width(family.homogeneous_base or 2, n)

    points = sample_cylinder_points(family, u, n, samples, seed)
    indices, counts = np.unique(_bin_indices(points, bin_width, origin), return_counts=True)
    return BinnedMeasure(bin_width, origin, indices, counts / samples, samples)
