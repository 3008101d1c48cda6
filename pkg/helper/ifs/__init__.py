"""
Exact representation of one-parameter IFS families on the line.
"""

from .errors import (BudgetExceededError, FamilyValidationError, HypothesisError,
                     IFSError, ParseError, UnsupportedFamilyError)
from .family import (AffineMapSpec, CylinderPoint, FamilySpec, Word,
                     attractor_similarity_dimension, compose, compose_word,
                     cylinder_point, similarity_dimension, support_bound,
                     word_depth_limit)
from .polynomial import ParamPoly
from .presets import carpet_family, resolve_preset, sandor_family, self_similar_carpet_family
from .validation import ClassReport, singularity_criterion_at, validate_rational_class

__all__ = [
    'AffineMapSpec', 'BudgetExceededError', 'ClassReport', 'CylinderPoint',
    'FamilySpec', 'FamilyValidationError', 'HypothesisError', 'IFSError',
    'ParamPoly', 'ParseError', 'UnsupportedFamilyError', 'Word',
    'attractor_similarity_dimension', 'carpet_family', 'compose', 'compose_word',
    'cylinder_point', 'resolve_preset', 'sandor_family', 'self_similar_carpet_family',
    'similarity_dimension', 'singularity_criterion_at', 'support_bound',
    'validate_rational_class', 'word_depth_limit',
]
