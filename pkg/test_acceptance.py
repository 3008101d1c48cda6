#!/usr/bin/env python3
"""
End-to-end checks of the headline facts: the Sandor overlap identity, class
reports, oracle equivalence, entropy behaviour, determinism and the
continuity probe.

The depth-14 run takes minutes; set IFSWEEP_RUN_SLOW=1 to include it. The
depth-12 contrast records its margin under golden/ on the first run and is
checked against that value afterwards.
"""

import math
import os
import sys
import time
from fractions import Fraction

# Add the project root to the path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from helper.analysis import (exact_overlap_identically, nondegeneracy_rank, overlap_search,
                             separation_profile)
from helper.ifs import (AffineMapSpec, FamilySpec, ParamPoly, Word,
                        attractor_similarity_dimension, carpet_family, sandor_family,
                        similarity_dimension, validate_rational_class)
from helper.measure import (brute_force_measure, dimension_profile, exact_level_measure,
                            lipschitz_bound, monte_carlo_binned, monte_carlo_dimension_profile,
                            phi_probe)
from helper.measure.entropy import no_collision_entropy
from helper.measure.lattice import iter_level_measures
from helper.storage import ResultStore
from helper.sweep import SweepPlan, farey_slopes, records_to_csv, run_sweep
from helper.sweep.runner import probe_function

RUN_SLOW = os.environ.get("IFSWEEP_RUN_SLOW", "").lower() in ("1", "true", "yes")
CARPET_SIM_DIM = 1.8927892607
ORACLE_SLOPES = [Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(2), Fraction(5, 3)]
GENERIC_SLOPE = 0.7071067811865475
GOLDEN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden")
MARGIN_GOLDEN = "rational_versus_generic_d12.json"
MARGIN_TOLERANCE = 1e-6


def four_map_family():
    ratio = ParamPoly.constant(Fraction(1, 3))
    translations = [ParamPoly((1,)), ParamPoly((0, 1)), ParamPoly((0, 0, 1)),
                    ParamPoly((0, 0, 0, 1))]
    return FamilySpec(tuple(AffineMapSpec(ratio, t) for t in translations),
                      (Fraction(0), Fraction(1)),
                      (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)))


def test_sandor_identity():
    """S_1 S_3 S_2 equals S_2 S_1 S_3 identically; moving one epsilon breaks it."""
    print("Testing the Sandor overlap identity...")
    start = time.perf_counter()
    sandor = sandor_family(Fraction(1, 100))
    assert exact_overlap_identically(sandor, Word.of(1, 3, 2), Word.of(2, 1, 3))

    shifted = ParamPoly.linear(Fraction(2, 100), 1)
    perturbed = FamilySpec(sandor.maps[:2] + (AffineMapSpec(shifted, shifted),),
                           sandor.interval, sandor.weights)
    assert not exact_overlap_identically(perturbed, Word.of(1, 3, 2), Word.of(2, 1, 3))
    assert time.perf_counter() - start < 1.0
    print("✅ Identity holds exactly and is not generic")


def test_sandor_dimension():
    """The Sandor attractor has similarity dimension above 1 at the interval midpoint."""
    print("Testing the Sandor similarity dimension...")
    sandor = sandor_family(Fraction(1, 100))
    lower, upper = sandor.interval
    midpoint = (lower + upper) / 2
    measure_dim = similarity_dimension(sandor, midpoint)
    attractor_dim = attractor_similarity_dimension(sandor, midpoint)
    print(f"   measure s={measure_dim:.6f}, attractor s={attractor_dim:.6f}")
    assert measure_dim > 1 + 1e-3
    assert attractor_dim > 1 + 1e-3
    ratios = [float(m.ratio(midpoint)) for m in sandor.maps]
    assert abs(sum(r ** attractor_dim for r in ratios) - 1.0) < 1e-9
    print("✅ Both dimensions exceed 1")


def test_carpet_class_report():
    """Every class check passes on the carpet except translation independence."""
    print("Testing the carpet class report...")
    carpet = carpet_family()
    report = validate_rational_class(carpet)
    assert carpet.m == 8 and carpet.homogeneous_base == 3
    assert abs(similarity_dimension(carpet, Fraction(1)) - CARPET_SIM_DIM) < 1e-9
    assert report.check("base_does_not_divide_weight_lcm").passed
    assert not report.check("translations_independent").passed
    assert nondegeneracy_rank(carpet) == (2, False)
    print("✅ Carpet report matches")


def test_oracle_equivalence_depth_five():
    """Lattice convolution equals brute force up to depth 5."""
    print("Testing oracle equivalence to depth 5...")
    carpet = carpet_family()
    for u in ORACLE_SLOPES:
        for measure in iter_level_measures(carpet, u, 5):
            assert measure == brute_force_measure(carpet, u, measure.level), (u, measure.level)
    four = four_map_family()
    for measure in iter_level_measures(four, Fraction(1, 2), 5):
        assert measure == brute_force_measure(four, Fraction(1, 2), measure.level)
    print("✅ All levels agree")


def test_depth_one_overlaps():
    """u = 1 collides at level 1; u = 1/3 separates with gap 1/3."""
    print("Testing depth-1 overlap facts...")
    carpet = carpet_family()
    pairs = {(w.word_i, w.word_j) for w in overlap_search(carpet, Fraction(1), 1)}
    # (0,1) ~ (1,0) and (1,2) ~ (2,1) in lattice digits
    assert (Word.of(2), Word.of(4)) in pairs and (Word.of(5), Word.of(7)) in pairs
    assert overlap_search(carpet, Fraction(1, 3), 1) == []
    assert separation_profile(carpet, Fraction(1, 3), 1).delta_n == [Fraction(1, 3)]
    print("✅ Depth-1 facts hold")


def test_entropy_closed_form():
    """H_1 at u = 1 against the closed form."""
    print("Testing the closed-form entropy...")
    profile = dimension_profile(carpet_family(), Fraction(1), [1])
    h1 = -(2 * (1 / 8) * math.log(1 / 8) + 3 * (1 / 4) * math.log(1 / 4))
    assert abs(profile.entropy_at(1) - h1) < 1e-12
    assert abs(profile.at(1) - h1 / math.log(3)) < 1e-12
    print("✅ H_1 matches")


def test_entropy_properties_depth_eight():
    """Normalization, d_2n <= d_n and the collision coupling at depth 8."""
    print("Testing entropy properties at depth 8...")
    carpet = carpet_family()
    depths = list(range(1, 9))
    for u in (Fraction(1), Fraction(1, 2), Fraction(2), Fraction(1, 3)):
        profile = dimension_profile(carpet, u, depths)
        for measure in iter_level_measures(carpet, u, 8):
            n = measure.level
            assert measure.total_mass() == 1
            collided = len(measure) < carpet.m ** n
            below = profile.entropy_at(n) < no_collision_entropy(carpet, n) - 1e-9
            assert collided == below, f"u={u}, n={n}"
        for n in (1, 2, 4):
            assert profile.at(2 * n) <= profile.at(n) + 1e-12
    print("✅ Entropy properties hold to depth 8")


def test_depth_fourteen():
    """Optional depth-14 run on the carpet at u = 1."""
    if not RUN_SLOW:
        print("Skipping depth-14 run (set IFSWEEP_RUN_SLOW=1)")
        return
    print("Testing depth 14...")
    profile = dimension_profile(carpet_family(), Fraction(1), [7, 14])
    assert profile.at(14) <= profile.at(7) + 1e-12
    print(f"✅ d_14 = {profile.at(14):.6f}")


def test_rational_versus_generic():
    """Exact d_12 at slope 1 sits below the generic Monte-Carlo d_12 by the golden margin."""
    print("Testing rational versus generic slopes at depth 12...")
    carpet = carpet_family()
    exact = dimension_profile(carpet, Fraction(1), [12]).at(12)
    generic = monte_carlo_dimension_profile(carpet, GENERIC_SLOPE, [12], samples=10 ** 6,
                                            seed=42).at(12)
    margin = generic - exact
    print(f"   exact d_12={exact:.9f}, Monte-Carlo d_12={generic:.9f}, margin={margin:.9f}")
    assert margin > 0

    golden = ResultStore(GOLDEN_DIR)
    if not golden.path_for(MARGIN_GOLDEN).exists():
        golden.save_json(MARGIN_GOLDEN, {"exact_d12": exact, "generic_d12": generic,
                                         "margin": margin, "seed": 42, "samples": 10 ** 6})
        print(f"   recorded golden margin in {golden.path_for(MARGIN_GOLDEN)}")
    recorded = golden.load_json(MARGIN_GOLDEN)
    assert abs(exact - recorded["exact_d12"]) <= 1e-9
    assert abs(margin - recorded["margin"]) <= MARGIN_TOLERANCE, (margin, recorded["margin"])
    print("✅ Rational slope shows the larger entropy deficit")


def test_determinism():
    """jobs=1 and jobs=8 sweeps match byte-for-byte; seeded Monte-Carlo repeats exactly."""
    print("Testing determinism...")
    common = dict(rational_slopes=3, float_grid=5, depths=[1, 2, 4], samples=20_000,
                  metrics=frozenset({"similarity_dim", "separation", "overlaps", "entropy"}),
                  interval=(Fraction(0), Fraction(2)))
    serial = records_to_csv(run_sweep(SweepPlan(parallelism=1, **common)))
    parallel = records_to_csv(run_sweep(SweepPlan(parallelism=8, **common)))
    assert serial == parallel

    carpet = carpet_family()
    first = monte_carlo_binned(carpet, GENERIC_SLOPE, 6, samples=100_000, seed=42)
    second = monte_carlo_binned(carpet, GENERIC_SLOPE, 6, samples=100_000, seed=42)
    assert first.same_bins(second)
    print("✅ Runs are reproducible")


def test_continuity_probe():
    """Phi on neighbouring carpet slopes obeys the Lipschitz bound with 1.1 slack."""
    print("Testing the continuity probe...")
    carpet = carpet_family()
    fn = probe_function(carpet)
    grid = farey_slopes((Fraction(0), Fraction(2)), 5)
    n = 6
    values = phi_probe(carpet, grid, n, fn)
    assert all(0.0 <= v <= 1.0 for v in values)
    for (u, a), (v, b) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        bound = lipschitz_bound(carpet, u, v, n, fn)
        assert abs(a - b) <= 1.1 * bound, f"|Phi({u}) - Phi({v})| = {abs(a - b)} > 1.1 * {bound}"
    print(f"✅ {len(grid) - 1} neighbouring pairs within the bound")


def main():
    """Run the acceptance checks."""
    print("=== acceptance Tests ===\n")
    tests = [
        test_sandor_identity, test_sandor_dimension, test_carpet_class_report,
        test_oracle_equivalence_depth_five, test_depth_one_overlaps, test_entropy_closed_form,
        test_entropy_properties_depth_eight, test_depth_fourteen, test_rational_versus_generic,
        test_determinism, test_continuity_probe,
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
    print(f"🎉 All {len(tests)} acceptance tests passed")
    return True


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
