"""
Sweep Runner - Coordinates per-parameter analyses for ifsweep.

Each parameter is analysed independently; workers receive only the immutable
FamilySpec and the metric settings, and results come back in input order, so
the merged output does not depend on the worker count.
"""

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed

from ..config.logging_config import (get_logger, log_error, log_function_entry,
                                     log_function_exit, log_performance)
from ..ifs.errors import BudgetExceededError, IFSError
from ..ifs.family import FamilySpec, similarity_dimension, support_bound
from ..ifs.rational import Parameter, format_fraction, parse_fraction
from ..ifs.validation import ClassReport, singularity_criterion_at
from ..analysis.overlap import OverlapWitness, overlap_search
from ..analysis.separation import SeparationProfile, separation_profile
from ..measure.entropy import DimensionEstimate, dimension_profile, monte_carlo_dimension_profile
from ..measure.integration import PiecewiseLinear, hat_function, integrate_test_function
from ..measure.lattice import iter_level_measures
from ..measure.sampling import sample_cylinder_points
from ..utils.progress_tracker import create_sweep_tracker
from .plan import FLOAT, METRICS, RATIONAL, SweepPlan

logger = get_logger(__name__)

# metrics that only make sense with exact arithmetic
RATIONAL_ONLY = frozenset({"overlaps", "criterion"})


@dataclass
class SweepRecord:
    """Per-parameter analysis bundle; fields are None for metrics not computed."""
    parameter: Parameter
    param_kind: str
    similarity_dim: Optional[float] = None
    class_report: Optional[ClassReport] = None
    separation: Optional[SeparationProfile] = None
    witnesses: Optional[List[OverlapWitness]] = None
    dimension: Optional[DimensionEstimate] = None
    phi_values: Optional[List[float]] = None
    budget_exceeded: bool = False
    errors: List[str] = field(default_factory=list)

    @property
    def is_rational(self) -> bool:
        return self.param_kind == RATIONAL

    def parameter_text(self) -> str:
        return format_fraction(self.parameter) if self.is_rational else repr(float(self.parameter))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "parameter": self.parameter_text() if self.is_rational else float(self.parameter),
            "param_kind": self.param_kind,
            "similarity_dim": self.similarity_dim,
            "class_report": self.class_report.to_dict() if self.class_report else None,
            "separation": self.separation.to_dict() if self.separation else None,
            "witnesses": ([w.to_dict() for w in self.witnesses]
                          if self.witnesses is not None else None),
            "dimension": self.dimension.to_dict() if self.dimension else None,
            "phi_values": list(self.phi_values) if self.phi_values is not None else None,
            "budget_exceeded": self.budget_exceeded,
            "errors": list(self.errors),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepRecord":
        kind = data["param_kind"]
        parameter = parse_fraction(data["parameter"]) if kind == RATIONAL else float(data["parameter"])
        witnesses = data.get("witnesses")
        return cls(
            parameter=parameter,
            param_kind=kind,
            similarity_dim=data.get("similarity_dim"),
            class_report=ClassReport.from_dict(data["class_report"]) if data.get("class_report") else None,
            separation=SeparationProfile.from_dict(data["separation"]) if data.get("separation") else None,
            witnesses=[OverlapWitness.from_dict(w) for w in witnesses] if witnesses is not None else None,
            dimension=DimensionEstimate.from_dict(data["dimension"]) if data.get("dimension") else None,
            phi_values=data.get("phi_values"),
            budget_exceeded=bool(data.get("budget_exceeded", False)),
            errors=list(data.get("errors", [])),
        )


def probe_function(family: FamilySpec) -> PiecewiseLinear:
    """
    Hat test function used by the phi_probe metric: peak 1 at half of the
    support bound at the interval midpoint, vanishing at 0 and at that bound.
    """
    lower, upper = family.interval
    xi = support_bound(family, (lower + upper) / 2)
    return hat_function(xi / 2, xi / 2)


def _phi_values(family: FamilySpec, u: Parameter, depths: Sequence[int],
                samples: Optional[int], seed: int) -> List[float]:
    fn = probe_function(family)
    if isinstance(u, float):
        return [float(fn.evaluate(sample_cylinder_points(family, u, n, samples or 100_000, seed)).mean())
                for n in depths]
    return [integrate_test_function(measure, fn)
            for measure in iter_level_measures(family, u, max(depths))
            if measure.level in depths]


def _compute_metric(record: SweepRecord, metric: str, family: FamilySpec, u: Parameter,
                    depths: List[int], seed: int, samples: Optional[int]):
    n_max = depths[-1]
    exact = record.is_rational
    if metric == "similarity_dim":
        record.similarity_dim = similarity_dimension(family, u)
    elif metric == "criterion":
        record.class_report = singularity_criterion_at(family, u)
    elif metric == "separation":
        record.separation = separation_profile(family, u, n_max)
    elif metric == "overlaps":
        record.witnesses = overlap_search(family, u, n_max)
    elif metric == "entropy":
        record.dimension = (dimension_profile(family, u, depths) if exact else
                            monte_carlo_dimension_profile(family, u, depths, samples, seed))
    elif metric == "phi_probe":
        record.phi_values = _phi_values(family, u, depths, samples, seed)


def analyze_parameter(family: FamilySpec, u: Parameter, metrics: FrozenSet[str],
                      depths: Sequence[int], seed: int, samples: Optional[int] = None,
                      timeout_seconds: Optional[float] = None) -> SweepRecord:
    """
    Compute the requested metrics at one parameter.

    Failures are stored in the record: a BudgetExceededError sets the budget
    flag, other family errors are kept as messages, and the remaining metrics
    still run. The timeout is cooperative: it is checked only before each
    metric starts, so a single long metric can overrun timeout_seconds by
    its own running time.

    Args:
        family: Family under study
        u: Fraction (rational lane) or float (float lane)
        metrics: Subset of METRICS
        depths: Depths for profiles; the largest one drives separation and overlaps
        seed: Monte-Carlo seed for the float lane
        samples: Monte-Carlo sample count override
        timeout_seconds: Wall-time allowance for this parameter

    Returns:
        SweepRecord with one populated field per computed metric
    """
    kind = FLOAT if isinstance(u, float) else RATIONAL
    record = SweepRecord(parameter=u if kind == FLOAT else Fraction(u), param_kind=kind)
    depths = sorted(set(depths))
    start = time.perf_counter()

    for metric in METRICS:
        if metric not in metrics or (kind == FLOAT and metric in RATIONAL_ONLY):
            continue
        if timeout_seconds is not None and time.perf_counter() - start > timeout_seconds:
            record.budget_exceeded = True
            record.errors.append(f"timeout: {timeout_seconds:g}s exceeded before {metric}")
            break
        try:
            _compute_metric(record, metric, family, record.parameter, depths, seed, samples)
        except BudgetExceededError as e:
            record.budget_exceeded = True
            record.errors.append(f"{metric}: {e}")
            logger.warning(f"Budget exceeded for {metric} at u={record.parameter_text()}: {e}")
        except (IFSError, ArithmeticError) as e:
            record.errors.append(f"{metric}: {e}")
            log_error(logger, e, f"{metric} at u={record.parameter_text()}")
    return record


def run_sweep(plan: SweepPlan) -> List[SweepRecord]:
    """
    Run every requested metric over the plan's parameters.

    Work is distributed parameter-wise with joblib; results are merged in
    parameter order, so the output is identical for any worker count.
    """
    log_function_entry(logger, "run_sweep", family=str(plan.family), qmax=plan.rational_slopes,
                       grid=plan.float_grid, metrics=sorted(plan.metrics), jobs=plan.parallelism)
    start = time.perf_counter()
    family = plan.resolve_family()
    parameters = plan.parameters(family)
    tracker = create_sweep_tracker(len(parameters))
    tracker.start()

    with tracker.track_step("enumerate"):
        logger.info(f"{len(parameters)} parameters "
                    f"({sum(1 for _, kind in parameters if kind == RATIONAL)} rational)")

    with tracker.track_step("compute"):
        records = Parallel(n_jobs=plan.parallelism)(
            delayed(analyze_parameter)(family, u, plan.metrics, plan.depths, plan.seed,
                                       plan.samples, plan.timeout_seconds)
            for u, _ in parameters)

    with tracker.track_step("merge"):
        order = np.argsort([float(r.parameter) for r in records], kind="stable")
        records = [records[i] for i in order]
        flagged = sum(1 for r in records if r.budget_exceeded)
        if flagged:
            logger.warning(f"{flagged} records hit the computation budget")

    tracker.finish()
    log_performance(logger, "run_sweep", time.perf_counter() - start)
    log_function_exit(logger, "run_sweep", f"{len(records)} records")
    return records
