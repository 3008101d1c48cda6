#!/usr/bin/env python3
"""
Test script for parameter sweeps: Farey slope enumeration, sweep plans,
the joblib runner, CSV/JSON/SVG reports and the command line exit codes.
"""

import contextlib
import io
import os
import sys
import tempfile
import xml.etree.ElementTree as ET
from fractions import Fraction

# Add the project root to the path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from helper.ifs import FamilyValidationError, ParseError, carpet_family, sandor_family
from helper.storage import ResultStore
from helper.sweep import (SweepPlan, SweepRecord, emit_report, farey_slopes, plan_from_text,
                          records_from_json, records_to_csv, records_to_json, run_sweep)
from helper.sweep.reports import records_to_svg
from helper.utils.progress_tracker import create_sweep_tracker
from main import EXIT_BUDGET, EXIT_OK, EXIT_VALIDATION
from main import main as cli_main

CSV_HEADER = ("parameter,param_kind,sim_dim,delta_n,has_collision,d_n,depth,rho_n,"
              "entropy_nats,witness_count,criterion_passed,phi,budget_exceeded,errors")
ENTROPY_PLAN = """
# carpet slopes with denominators up to 4 away from u = 0
family = carpet
qmax = 4
interval = [1/4, 2]
depths = [1, 2, 4, 8]
metrics = [entropy, similarity_dim]
"""


def brute_force_slopes(lower, upper, q_max):
    found = set()
    for q in range(1, q_max + 1):
        for p in range(int(lower * q) - 1, int(upper * q) + 2):
            u = Fraction(p, q)
            if lower <= u <= upper:
                found.add(u)
    return sorted(found)


def count_markers(svg: str) -> int:
    """Drawn markers inside the sweep-markers group, whichever way matplotlib emitted them."""
    root = ET.fromstring(svg.encode("utf-8"))
    group = next(el for el in root.iter() if el.get("id") == "sweep-markers")

    def walk(element, in_defs):
        count = 0
        for child in element:
            tag = child.tag.rsplit("}", 1)[-1]
            if tag == "defs":
                count += walk(child, True)
                continue
            if tag == "use" or (tag == "path" and not in_defs):
                count += 1
            count += walk(child, in_defs)
        return count

    return walk(group, False)


def run_cli(argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = cli_main(argv)
    return code, out.getvalue()


def test_farey_slopes():
    """Stern-Brocot enumeration of rationals with bounded denominator."""
    print("Testing farey_slopes...")
    unit = (Fraction(0), Fraction(1))
    assert farey_slopes(unit, 3) == [Fraction(0), Fraction(1, 3), Fraction(1, 2),
                                     Fraction(2, 3), Fraction(1)]
    assert farey_slopes((Fraction(0), Fraction(2)), 1) == [Fraction(0), Fraction(1), Fraction(2)]
    for lower, upper, q_max in [(Fraction(0), Fraction(10), 5), (Fraction(1, 4), Fraction(2), 7),
                                (Fraction(2, 7), Fraction(3, 7), 11)]:
        assert farey_slopes((lower, upper), q_max) == brute_force_slopes(lower, upper, q_max)
    assert farey_slopes((Fraction(1, 2), Fraction(1, 2)), 4) == [Fraction(1, 2)]
    assert farey_slopes((Fraction(0), Fraction(5, 2)), 2) == [
        Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(5, 2)]
    assert farey_slopes((Fraction(1, 4), Fraction(3, 4)), 4) == [
        Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)]
    assert farey_slopes((Fraction(2), Fraction(2)), 3) == [Fraction(2)]
    sandor_lower, sandor_upper = sandor_family(Fraction(1, 100)).interval
    inside = farey_slopes((sandor_lower, sandor_upper), 100)
    assert Fraction(33, 98) in inside
    assert inside == brute_force_slopes(sandor_lower, sandor_upper, 100)
    for bad in [((Fraction(1), Fraction(0)), 3), (unit, 0)]:
        try:
            farey_slopes(*bad)
            assert False, f"{bad} should be rejected"
        except FamilyValidationError:
            pass
    print("✅ Farey slopes match brute-force enumeration")


def test_plan_parsing():
    """Plan files parse into SweepPlan values."""
    print("Testing plan parsing...")
    plan = plan_from_text(ENTROPY_PLAN)
    assert plan.family == "carpet" and plan.rational_slopes == 4
    assert plan.depths == [1, 2, 4, 8]
    assert plan.metrics == frozenset({"entropy", "similarity_dim"})
    assert plan.interval == (Fraction(1, 4), Fraction(2))
    parameters = plan.parameters(plan.resolve_family())
    assert [u for u, _ in parameters] == brute_force_slopes(Fraction(1, 4), Fraction(2), 4)

    mixed = SweepPlan(rational_slopes=1, float_grid=3, interval=(Fraction(0), Fraction(2)))
    tagged = mixed.parameters(carpet_family())
    assert tagged == [(Fraction(0), "rational"), (0.0, "float"), (Fraction(1), "rational"),
                      (1.0, "float"), (Fraction(2), "rational"), (2.0, "float")]

    for bad in ["qmax = 3\nmetrics = [entropy, volume]", "family = carpet",
                "qmax = 3\njobs = 0", "qmax = 3\ninterval = [1]", "qmax three"]:
        try:
            plan_from_text(bad)
            assert False, f"{bad!r} should not parse"
        except ParseError:
            pass
    print("✅ Plans parse and validate")


def test_sweep_entropy_drops():
    """d_8 < d_1 at every slope away from u = 0."""
    print("Testing an entropy sweep...")
    records = run_sweep(plan_from_text(ENTROPY_PLAN))
    assert len(records) == len(brute_force_slopes(Fraction(1, 4), Fraction(2), 4))
    assert [r.parameter for r in records] == sorted(r.parameter for r in records)
    for record in records:
        assert not record.errors, record.errors
        assert record.dimension.depths == [1, 2, 4, 8]
        assert record.dimension.at(8) < record.dimension.at(1), record.parameter_text()
        assert record.separation is None and record.witnesses is None
    print("✅ Entropy ratios drop with depth")


def test_sweep_inside_one_unit():
    """A family interval strictly inside (0, 1) still yields its rational slopes."""
    print("Testing a Sandor sweep...")
    sandor = sandor_family(Fraction(1, 100))
    records = run_sweep(SweepPlan(family="sandor:eps=1/100", rational_slopes=100,
                                  metrics=frozenset({"similarity_dim"})))
    assert [r.parameter for r in records] == farey_slopes(sandor.interval, 100)
    assert records and all(r.similarity_dim is not None and not r.errors for r in records)
    print(f"✅ {len(records)} slopes inside the Sandor interval")


def test_sweep_without_metrics():
    """An empty metric set still lists every parameter."""
    print("Testing a metric-free sweep...")
    records = run_sweep(SweepPlan(rational_slopes=2, metrics=frozenset(),
                                  interval=(Fraction(0), Fraction(1))))
    assert [r.parameter for r in records] == [Fraction(0), Fraction(1, 2), Fraction(1)]
    assert all(r.dimension is None and r.similarity_dim is None for r in records)
    lines = records_to_csv(records).splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[2].startswith("1/2,rational,")
    print("✅ Parameter-only records")


def test_sweep_parallel_identical():
    """One and two workers give byte-identical CSV."""
    print("Testing parallel determinism...")
    common = dict(rational_slopes=3, float_grid=3, depths=[1, 2, 3], samples=5000,
                  metrics=frozenset({"similarity_dim", "separation", "entropy"}),
                  interval=(Fraction(0), Fraction(2)))
    serial = records_to_csv(run_sweep(SweepPlan(parallelism=1, **common)))
    parallel = records_to_csv(run_sweep(SweepPlan(parallelism=2, **common)))
    assert serial == parallel
    assert serial.startswith(CSV_HEADER + "\n")
    print("✅ Worker count does not change the report")


def test_reports():
    """CSV columns, JSON reload and SVG markers."""
    print("Testing reports...")
    records = run_sweep(SweepPlan(rational_slopes=2, depths=[1, 2],
                                  metrics=frozenset({"similarity_dim", "separation",
                                                     "overlaps", "entropy"}),
                                  interval=(Fraction(0), Fraction(2))))
    csv_lines = records_to_csv(records).splitlines()
    assert csv_lines[0] == CSV_HEADER
    assert len(csv_lines) == len(records) + 1
    one = next(line for line in csv_lines[1:] if line.startswith("1,"))
    fields = one.split(",")
    assert fields[1] == "rational" and fields[3] == "1/3" and fields[4] == "true"

    text = records_to_json(records)
    assert records_to_json(records_from_json(text)) == text
    try:
        records_from_json('{"format": "something-else", "records": []}')
        assert False, "foreign documents are rejected"
    except ParseError:
        pass

    extra = SweepRecord(parameter=Fraction(5, 2), param_kind="rational")
    svg = records_to_svg(records + [extra])
    assert count_markers(svg) == len(records)
    assert 'id="similarity-dimension"' in svg and 'id="height-one"' in svg
    print("✅ Reports are consistent")


def test_emit_report():
    """emit_report writes through the result store and rejects bad input."""
    print("Testing emit_report...")
    records = [SweepRecord(parameter=Fraction(1, 2), param_kind="rational", similarity_dim=1.5)]
    with tempfile.TemporaryDirectory() as tmp:
        store = ResultStore(tmp)
        path = emit_report(records, "csv", "out/sweep.csv", store)
        assert path == store.path_for("out/sweep.csv")
        assert store.load_text("out/sweep.csv").splitlines()[0] == CSV_HEADER
        emit_report(records, "json", "sweep.json", store)
        assert records_from_json(store.load_text("sweep.json"))[0].parameter == Fraction(1, 2)
        for bad_records, fmt in [([], "csv"), (records, "pdf")]:
            try:
                emit_report(bad_records, fmt, "bad.out", store)
                assert False, f"{fmt} with {len(bad_records)} records should fail"
            except FamilyValidationError:
                pass
        assert not store.path_for("bad.out").exists()
    print("✅ emit_report validates its input")


def test_progress_tracker():
    """Sweep tracker weights and step states."""
    print("Testing the sweep progress tracker...")
    tracker = create_sweep_tracker(3)
    tracker.start()
    assert [step['name'] for step in tracker.steps] == ["enumerate", "compute", "merge"]
    assert tracker.progress() == 0.0
    with tracker.track_step("enumerate"):
        assert abs(tracker.progress() - 0.25 / 9) < 1e-12
    assert abs(tracker.progress() - 0.5 / 9) < 1e-12
    try:
        with tracker.track_step("compute"):
            raise RuntimeError("worker died")
    except RuntimeError:
        pass
    assert tracker.steps[1]['status'] == 'failed' and tracker.steps[1]['error'] == "worker died"
    assert tracker.finish() >= 0.0
    print("✅ Tracker records step states")


def test_cli_exit_codes():
    """0 success, 1 validation failure, 2 budget exceeded."""
    print("Testing CLI exit codes...")
    code, out = run_cli(["preset", "list"])
    assert code == EXIT_OK and "carpet" in out

    code, out = run_cli(["validate", "--family", "carpet"])
    assert code == EXIT_VALIDATION and "translations_independent" in out

    code, out = run_cli(["overlap-search", "--family", "carpet", "--param", "1", "--depth", "1"])
    assert code == EXIT_OK
    assert out.splitlines() == ["2 ~ 4 @ 1", "3 ~ 6 @ 1", "5 ~ 7 @ 1"]

    code, _ = run_cli(["analyze", "--family", "carpet", "--param", "1", "--depth", "40",
                       "--metrics", "entropy"])
    assert code == EXIT_BUDGET

    code, _ = run_cli(["analyze", "--family", "carpet", "--param", "99"])
    assert code == EXIT_VALIDATION

    code, out = run_cli(["info"])
    assert code == EXIT_OK and '"configuration_checks"' in out

    with tempfile.TemporaryDirectory() as tmp:
        dump = os.path.join(tmp, "level2.bin")
        code, out = run_cli(["export", "--family", "carpet", "--param", "1/2", "--depth", "2",
                             "--format", "bin", "--out", dump])
        assert code == EXIT_OK and out.strip() == dump
        assert ResultStore(tmp).load_measure_binary("level2.bin").level == 2

        target = os.path.join(tmp, "sweep.csv")
        code, _ = run_cli(["sweep", "--family", "carpet", "--qmax", "2", "--depth", "2",
                           "--metrics", "similarity_dim,separation", "--out", target])
        assert code == EXIT_OK
        with open(target, encoding="utf-8") as f:
            assert f.readline().strip() == CSV_HEADER
    print("✅ Exit codes follow the documented contract")


def main():
    """Run the sweep and CLI tests."""
    print("=== sweep-cli Tests ===\n")
    tests = [
        test_farey_slopes, test_plan_parsing, test_sweep_entropy_drops, test_sweep_inside_one_unit,
        test_sweep_without_metrics, test_sweep_parallel_identical, test_reports, test_emit_report,
        test_progress_tracker, test_cli_exit_codes,
    ]
    failed = []
    for test in tests:
        try:
            test()
            print(f"PASS {test.__name__}\n")
        except Exception as e:
            print(f"FAIL {test.__name__}: {e}\n")
            import traceback
            traceback.print_exc()
            failed.append(test.__name__)

    if failed:
        print(f"❌ {len(failed)} of {len(tests)} tests failed: {failed}")
        return False
    print(f"🎉 All {len(tests)} sweep-cli tests passed")
    return True


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
