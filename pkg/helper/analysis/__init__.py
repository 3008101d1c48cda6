"""
Overlap detection, cylinder separation and non-degeneracy checks.
"""

from .overlap import (OverlapKind, OverlapWitness, exact_overlap_at,
                      exact_overlap_identically, overlap_search, witness_from_line)
from .separation import (NonDegeneracyResult, SeparationProfile, nondegeneracy_rank,
                         separation_profile)

__all__ = [
    'NonDegeneracyResult', 'OverlapKind', 'OverlapWitness', 'SeparationProfile',
    'exact_overlap_at', 'exact_overlap_identically', 'nondegeneracy_rank',
    'overlap_search', 'separation_profile', 'witness_from_line',
]
