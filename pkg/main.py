"""
ifsweep - Command Line Entry Point

Computational experiments on one-parameter families of self-similar
iterated function systems on the line:
- exact overlap search and cylinder separation profiles
- exact and Monte-Carlo entropy dimension estimates
- arithmetic class reports for rational parameters
- parameter sweeps with CSV, JSON and SVG reports

Exit codes: 0 success, 1 validation failure, 2 budget exceeded.
"""

import argparse
import json
import sys
from typing import List, Optional

from helper.analysis import nondegeneracy_rank, overlap_search
from helper.config.config import get_config
from helper.config.logging_config import get_logger, setup_logging
from helper.ifs import BudgetExceededError, FamilySpec, IFSError
from helper.ifs.presets import list_presets
from helper.ifs.family_io import load_family
from helper.ifs.rational import Parameter, parse_fraction
from helper.ifs.validation import singularity_criterion_at, validate_rational_class
from helper.measure import (dimension_profile, exact_level_measure,
                            monte_carlo_dimension_profile)
from helper.sweep import METRICS, SweepPlan, analyze_parameter, emit_report, load_plan, run_sweep
from helper.sweep.reports import records_to_json
from helper.storage import get_result_store

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BUDGET = 2

logger = get_logger("main")


def _depths(text: str) -> List[int]:
    """'8' means 1..8, '1,2,4,8' is taken literally."""
    parts = [int(p) for p in text.split(",") if p.strip()]
    if len(parts) == 1:
        return list(range(1, parts[0] + 1))
    return parts


def _metrics(text: Optional[str]) -> frozenset:
    if text is None:
        return frozenset(METRICS)
    return frozenset(m.strip() for m in text.split(",") if m.strip())


def _parameter(args, family: FamilySpec) -> Parameter:
    if args.param is not None and args.param_float is not None:
        raise IFSError("Give either --param or --param-float, not both")
    if args.param is None and args.param_float is None:
        raise IFSError("A parameter is required: --param p/q or --param-float x")
    u = parse_fraction(args.param) if args.param is not None else float(args.param_float)
    family.check_parameter(u)
    return u


def cmd_preset(args) -> int:
    for name, description in list_presets().items():
        print(f"{name:<28} {description}")
    return EXIT_OK


def cmd_info(args) -> int:
    config = get_config()
    checks = config.validate_configuration()
    print(json.dumps({
        "environment": config.get_environment_info(),
        "configuration_checks": checks,
        "storage": get_result_store().get_storage_info(),
    }, indent=2))
    return EXIT_OK if all(checks.values()) else EXIT_VALIDATION


def cmd_validate(args) -> int:
    family = load_family(args.family)
    if args.param is not None:
        report = singularity_criterion_at(family, parse_fraction(args.param))
    else:
        report = validate_rational_class(family)
    print(report.summary())
    if family.is_homogeneous and family.homogeneous_base >= 3:
        rank = nondegeneracy_rank(family)
        print(f"  non-degeneracy rank: {rank.rank} of {family.m} "
              f"({'pass' if rank.passes else 'fail'})")
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_analyze(args) -> int:
    family = load_family(args.family)
    u = _parameter(args, family)
    seed = args.seed if args.seed is not None else get_config().monte_carlo.seed
    record = analyze_parameter(family, u, _metrics(args.metrics), _depths(args.depth), seed,
                               timeout_seconds=get_config().sweep.timeout_seconds)
    if args.out:
        get_result_store().save_json(args.out, record.to_dict())
    else:
        print(json.dumps(record.to_dict(), indent=2))
    for error in record.errors:
        logger.warning(error)
    return EXIT_BUDGET if record.budget_exceeded else EXIT_OK


def cmd_overlap_search(args) -> int:
    family = load_family(args.family)
    if args.param is None:
        raise IFSError("overlap-search needs a rational --param p/q")
    u = parse_fraction(args.param)
    family.check_parameter(u)
    witnesses = overlap_search(family, u, max(_depths(args.depth)))
    for witness in witnesses:
        print(witness.to_line())
    logger.info(f"{len(witnesses)} witnesses")
    return EXIT_OK


def cmd_entropy(args) -> int:
    family = load_family(args.family)
    u = _parameter(args, family)
    depths = _depths(args.depth)
    if isinstance(u, float):
        profile = monte_carlo_dimension_profile(family, u, depths, args.samples, args.seed)
    else:
        profile = dimension_profile(family, u, depths)
    print(f"{'n':>4} {'H_n (nats)':>18} {'d_n':>14}")
    for n, h, d in zip(profile.depths, profile.entropy_nats, profile.ratio):
        print(f"{n:>4} {h:>18.12f} {d:>14.10f}")
    if profile.similarity_dimension is not None:
        print(f"similarity dimension: {profile.similarity_dimension:.10f}")
    return EXIT_OK


def cmd_export(args) -> int:
    family = load_family(args.family)
    if args.param is None:
        raise IFSError("export needs a rational --param p/q")
    measure = exact_level_measure(family, parse_fraction(args.param), args.depth)
    store = get_result_store()
    out = args.out or f"measure_n{args.depth}.{args.format}"
    if args.format == "csv":
        path = store.save_measure_csv(out, measure)
    else:
        path = store.save_measure_binary(out, measure)
    print(path)
    return EXIT_OK


def _sweep_plan(args) -> SweepPlan:
    if args.plan:
        return _apply_overrides(load_plan(args.plan), args)
    plan = SweepPlan(family=args.family or "carpet", rational_slopes=args.qmax,
                     float_grid=args.grid or 0)
    return _apply_overrides(plan, args)


def _apply_overrides(plan: SweepPlan, args) -> SweepPlan:
    overrides = {}
    if args.plan and args.family:
        overrides["family"] = args.family
    if args.plan and args.qmax is not None:
        overrides["rational_slopes"] = args.qmax
    if args.plan and args.grid is not None:
        overrides["float_grid"] = args.grid
    if args.depth is not None:
        overrides["depths"] = _depths(args.depth)
    if args.metrics is not None:
        overrides["metrics"] = _metrics(args.metrics)
    if args.jobs is not None:
        overrides["parallelism"] = args.jobs
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.samples is not None:
        overrides["samples"] = args.samples
    if not overrides:
        return plan
    fields = {name: getattr(plan, name) for name in plan.__dataclass_fields__}
    fields.update(overrides)
    return SweepPlan(**fields)


def cmd_sweep(args) -> int:
    plan = _sweep_plan(args)
    records = run_sweep(plan)
    out = args.out or f"sweep.{args.format}"
    path = emit_report(records, args.format, out)
    print(path)
    if args.format != "json" and args.json_out:
        get_result_store().save_text(args.json_out, records_to_json(records))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ifsweep",
        description="Overlaps, separation and entropy dimension of one-parameter IFS families",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("--log-level", default=None, help="Override LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    def family_arg(p, required=True):
        p.add_argument("--family", required=required, help="Preset name or family file")

    def param_args(p):
        p.add_argument("--param", default=None, help="Rational parameter p/q")
        p.add_argument("--param-float", type=float, default=None, help="Float parameter")

    preset = sub.add_parser("preset", help="Built-in families")
    preset.add_argument("action", choices=["list"])
    preset.set_defaults(handler=cmd_preset)

    info = sub.add_parser("info", help="Configuration checks and result store summary")
    info.set_defaults(handler=cmd_info)

    export = sub.add_parser("export", help="Write an exact level-n measure as CSV or binary")
    family_arg(export)
    export.add_argument("--param", default=None, help="Rational parameter p/q")
    export.add_argument("--depth", type=int, default=4)
    export.add_argument("--format", choices=["csv", "bin"], default="csv")
    export.add_argument("--out", default=None)
    export.set_defaults(handler=cmd_export)

    validate = sub.add_parser("validate", help="Arithmetic class report")
    family_arg(validate)
    validate.add_argument("--param", default=None,
                          help="Check the singularity criterion at this rational parameter")
    validate.set_defaults(handler=cmd_validate)

    analyze = sub.add_parser("analyze", help="All metrics at one parameter, as JSON")
    family_arg(analyze)
    param_args(analyze)
    analyze.add_argument("--depth", default="8", help="n (meaning 1..n) or a list n1,n2,...")
    analyze.add_argument("--metrics", default=None, help=f"Subset of {','.join(METRICS)}")
    analyze.add_argument("--seed", type=int, default=None)
    analyze.add_argument("--out", default=None)
    analyze.set_defaults(handler=cmd_analyze)

    overlaps = sub.add_parser("overlap-search", help="Exact overlap witnesses")
    family_arg(overlaps)
    overlaps.add_argument("--param", default=None, help="Rational parameter p/q")
    overlaps.add_argument("--depth", default="4")
    overlaps.set_defaults(handler=cmd_overlap_search)

    entropy = sub.add_parser("entropy", help="Entropy dimension profile")
    family_arg(entropy)
    param_args(entropy)
    entropy.add_argument("--depth", default="1,2,4,8")
    entropy.add_argument("--samples", type=int, default=None)
    entropy.add_argument("--seed", type=int, default=None)
    entropy.set_defaults(handler=cmd_entropy)

    sweep = sub.add_parser("sweep", help="Sweep a parameter interval")
    sweep.add_argument("plan", nargs="?", default=None, help="Plan file")
    family_arg(sweep, required=False)
    sweep.add_argument("--qmax", type=int, default=None, help="Largest slope denominator")
    sweep.add_argument("--grid", type=int, default=None, help="Number of float parameters")
    sweep.add_argument("--depth", default=None)
    sweep.add_argument("--metrics", default=None)
    sweep.add_argument("--jobs", type=int, default=None)
    sweep.add_argument("--seed", type=int, default=None)
    sweep.add_argument("--samples", type=int, default=None)
    sweep.add_argument("--out", default=None)
    sweep.add_argument("--format", choices=["csv", "json", "svg"], default="csv")
    sweep.add_argument("--json-out", default=None, help="Also write the JSON records here")
    sweep.set_defaults(handler=cmd_sweep)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = get_config()
    setup_logging(log_level=args.log_level or config.app.log_level,
                  log_to_file=config.app.log_to_file)
    logger.debug(f"Running {args.command}")
    try:
        return args.handler(args)
    except BudgetExceededError as e:
        logger.error(str(e))
        return EXIT_BUDGET
    except IFSError as e:
        logger.error(str(e))
        return EXIT_VALIDATION
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
