"""
Exception hierarchy for ifsweep.
"""

from typing import Optional


class IFSError(ValueError):
    """Base class for invalid input to an ifsweep operation."""


class FamilyValidationError(IFSError):
    """A family spec, word or parameter violates its invariants."""


class UnsupportedFamilyError(IFSError):
    """The operation needs a homogeneous family and got a general one."""


class HypothesisError(IFSError):
    """A hypothesis required by a criterion does not hold for the family."""


class ParseError(IFSError):
    """Malformed family or plan text."""


class BudgetExceededError(RuntimeError):
    """A computation would exceed its memory budget.

    Carries the requested depth and the deepest depth that fits the budget.
    """

    def __init__(self, message: str, requested: Optional[int] = None,
                 feasible: Optional[int] = None):
        self.requested = requested
        self.feasible = feasible
        if feasible is not None:
            message = f"{message} (largest feasible depth: {feasible})"
        super().__init__(message)
