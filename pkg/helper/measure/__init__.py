"""
Measure engine: exact lattice discretizations, Monte-Carlo histograms,
entropy dimension estimates and test-function integrals.
"""

from .entropy import (DimensionEstimate, dimension_profile, entropy_dimension,
                      monte_carlo_dimension_profile)
from .integration import (PiecewiseLinear, hat_function, integrate_test_function,
                          lipschitz_bound, phi_probe)
from .lattice import LatticeMeasure, brute_force_measure, exact_level_measure
from .sampling import BinnedMeasure, bin_lattice_measure, monte_carlo_binned

__all__ = [
    'BinnedMeasure', 'DimensionEstimate', 'LatticeMeasure', 'PiecewiseLinear',
    'bin_lattice_measure', 'brute_force_measure', 'dimension_profile', 'hat_function',
    'entropy_dimension', 'exact_level_measure', 'integrate_test_function',
    'lipschitz_bound', 'monte_carlo_binned', 'monte_carlo_dimension_profile',
    'phi_probe',
]
