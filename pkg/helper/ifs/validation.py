"""
Structural checks for membership in the rational-coefficient class of
homogeneous families, and for the arithmetic singularity criterion at a
rational parameter.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from ..config.logging_config import get_logger, log_function_entry, log_function_exit
from .family import FamilySpec, similarity_dimension
from .rational import Parameter, common_denominator, format_fraction, rational_rank

logger = get_logger(__name__)


@dataclass(frozen=True)
class ClassCheck:
    """One independent check with the value that decided it."""
    name: str
    passed: bool
    witness: str


@dataclass
class ClassReport:
    """Independent boolean checks; failures are entries, never exceptions."""
    family_name: str
    checks: List[ClassCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> ClassCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def add(self, name: str, passed: bool, witness: str):
        self.checks.append(ClassCheck(name, bool(passed), witness))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family_name,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "witness": c.witness}
                for c in self.checks
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ClassReport":
        return cls(data["family"], [
            ClassCheck(c["name"], c["passed"], c["witness"]) for c in data["checks"]
        ])

    def summary(self) -> str:
        lines = [f"Class report for {self.family_name}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            lines.append(f"  [{'pass' if c.passed else 'FAIL'}] {c.name}: {c.witness}")
        return "\n".join(lines)


def translation_coefficient_matrix(family: FamilySpec) -> List[List[Fraction]]:
    """m x (d+1) matrix whose row i holds the coefficients of t_i."""
    width = max(family.max_degree() + 1, 1)
    return [list(spec.translation.padded(width)) for spec in family.maps]


def translation_rank(family: FamilySpec) -> int:
    return rational_rank(translation_coefficient_matrix(family))


def _reference_parameter(family: FamilySpec) -> Fraction:
    lower, upper = family.interval
    return (lower + upper) / 2


def _check_base_divisibility(report: ClassReport, family: FamilySpec):
    q = common_denominator(family.weights)
    base = family.homogeneous_base
    if base is None:
        report.add("base_does_not_divide_weight_lcm", False, f"no common base; lcm={q}")
    else:
        report.add("base_does_not_divide_weight_lcm", q % base != 0,
                   f"L={base}, lcm of weight denominators={q}")


def _check_similarity_dimension(report: ClassReport, family: FamilySpec, u: Parameter):
    try:
        s = similarity_dimension(family, u)
    except ValueError as e:
        report.add("similarity_dimension_above_one", False, str(e))
        return
    report.add("similarity_dimension_above_one", s > 1, f"s={s:.10f}")


def validate_rational_class(family: FamilySpec) -> ClassReport:
    """
    Check the defining conditions of the rational-coefficient class.

    Checks, each reported independently: at least 4 maps; homogeneous with
    3 <= L <= m-1; similarity dimension > 1; L does not divide the lcm of the
    reduced weight denominators; translation polynomials linearly independent
    over Q.

    Args:
        family: Family to inspect

    Returns:
        ClassReport with one entry per check
    """
    log_function_entry(logger, "validate_rational_class", family=family.name)
    report = ClassReport(family.name)
    m = family.m
    base = family.homogeneous_base

    report.add("at_least_four_maps", m >= 4, f"m={m}")
    if base is None:
        report.add("homogeneous_base_in_range", False, "ratios are not a common 1/L")
    else:
        report.add("homogeneous_base_in_range", 3 <= base <= m - 1, f"L={base}, m-1={m - 1}")
    _check_similarity_dimension(report, family, _reference_parameter(family))
    _check_base_divisibility(report, family)
    rank = translation_rank(family)
    report.add("translations_independent", rank == m, f"rank={rank} of {m} rows")

    log_function_exit(logger, "validate_rational_class", "PASS" if report.passed else "FAIL")
    return report


def singularity_criterion_at(family: FamilySpec, u: Fraction) -> ClassReport:
    """
    Hypotheses of the lattice singularity criterion at a rational parameter.

    Homogeneous base L >= 2, translations on a common lattice a*Z, L not
    dividing the lcm of the weight denominators, and similarity dimension
    above 1. When all pass the projected measure at u has dimension below 1.
    """
    family.check_parameter(u)
    report = ClassReport(f"{family.name} @ u={format_fraction(Fraction(u))}")
    base = family.homogeneous_base
    report.add("homogeneous_base", base is not None and base >= 2,
               f"L={base}" if base is not None else "not homogeneous")

    translations = family.translations_at(u)
    step = Fraction(1, common_denominator(translations))
    nonzero = [t for t in translations if t != 0]
    if nonzero:
        gcd_num = math.gcd(*[int(t / step) for t in nonzero])
        step *= gcd_num
    report.add("translations_on_lattice", all((t / step).denominator == 1 for t in translations),
               f"lattice step {format_fraction(step)}")
    _check_base_divisibility(report, family)
    _check_similarity_dimension(report, family, u)
    return report
