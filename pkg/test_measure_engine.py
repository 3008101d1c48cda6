#!/usr/bin/env python3
"""
Test script for the measure engine: exact lattice measures against the
brute-force oracle, entropy estimates, Monte-Carlo histograms, test-function
integrals and measure exports.
"""

import math
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np

# Add the project root to the path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from helper.analysis import overlap_search
from helper.config.config import EngineConfig, SweepConfig, reload_config
from helper.ifs import (AffineMapSpec, BudgetExceededError, FamilySpec, IFSError, ParamPoly,
                        carpet_family)
from helper.measure import (LatticeMeasure, PiecewiseLinear, bin_lattice_measure,
                            brute_force_measure, dimension_profile, entropy_dimension,
                            exact_level_measure, hat_function, integrate_test_function,
                            monte_carlo_binned)
from helper.measure.entropy import entropy_standard_error, no_collision_entropy
from helper.measure.integration import max_translation_speed
from helper.measure.lattice import feasible_depth, iter_level_measures, lattice_digits
from helper.measure.sampling import MultiplyWithCarry
from helper.storage import ResultStore

CARPET_SLOPES = [Fraction(1), Fraction(1, 2), Fraction(1, 3), Fraction(2)]
H1_AT_ONE = -(2 * (1 / 8) * math.log(1 / 8) + 3 * (1 / 4) * math.log(1 / 4))


def homogeneous_family(translations, weights, base=3):
    ratio = ParamPoly.constant(Fraction(1, base))
    maps = tuple(AffineMapSpec(ratio, t) for t in translations)
    return FamilySpec(maps, (Fraction(0), Fraction(1)), tuple(weights))


def four_map_family():
    return homogeneous_family(
        [ParamPoly((1,)), ParamPoly((0, 1)), ParamPoly((0, 0, 1)), ParamPoly((0, 0, 0, 1))],
        (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)))


def test_level_one_atoms():
    """Level-1 measures of the carpet at u = 1 and u = 1/3."""
    print("Testing level-1 atoms...")
    carpet = carpet_family()
    one = exact_level_measure(carpet, Fraction(1), 1)
    assert one.atoms() == {0: Fraction(1, 8), 1: Fraction(1, 4), 2: Fraction(1, 4),
                           3: Fraction(1, 4), 4: Fraction(1, 8)}
    third = exact_level_measure(carpet, Fraction(1, 3), 1)
    assert len(third) == 8
    assert set(third.atoms().values()) == {Fraction(1, 8)}
    print("✅ Level-1 atoms match the digit enumeration")


def test_normalization_and_lattice():
    """Exact total mass and the lattice denominator q * L^(n-1)."""
    print("Testing normalization...")
    carpet = carpet_family()
    for u in CARPET_SLOPES:
        for measure in iter_level_measures(carpet, u, 6):
            assert measure.total_mass() == 1, f"mass drift at u={u}, n={measure.level}"
            assert measure.lattice_denominator == u.denominator * 3 ** (measure.level - 1)
            assert np.all(np.diff(measure.offsets.astype(np.int64)) > 0)
            assert all(w > 0 for w in measure.mass_numerators)
    print("✅ Masses sum to exactly 1 at every level")


def test_oracle_equivalence():
    """Sparse convolution against brute-force enumeration."""
    print("Testing oracle equivalence...")
    carpet = carpet_family()
    for u in CARPET_SLOPES:
        for n in range(1, 5):
            assert exact_level_measure(carpet, u, n) == brute_force_measure(carpet, u, n), (u, n)
    four = four_map_family()
    for u in (Fraction(1, 2), Fraction(2, 3)):
        for n in range(1, 6):
            assert exact_level_measure(four, u, n) == brute_force_measure(four, u, n), (u, n)
    top = max(brute_force_measure(carpet, Fraction(1), 1).atoms().values())
    assert top == Fraction(2, 8)
    print("✅ Exact measures agree atom-for-atom with the oracle")


def test_budgets():
    """Budget errors carry the feasible depth."""
    print("Testing budgets...")
    carpet = carpet_family()
    try:
        exact_level_measure(carpet, Fraction(1), 10, max_atoms=1000)
        assert False, "1000 atoms cannot hold level 10"
    except BudgetExceededError as e:
        assert e.requested == 10 and e.feasible == 4, (e.requested, e.feasible)
    try:
        brute_force_measure(carpet, Fraction(1), 7)
        assert False, "brute force is limited to depth 6"
    except BudgetExceededError:
        pass

    previous = os.environ.get("MAX_ATOMS")
    os.environ["MAX_ATOMS"] = "1000"
    try:
        assert reload_config().engine.max_atoms == 1000
        try:
            exact_level_measure(carpet, Fraction(1), 10)
            assert False, "MAX_ATOMS=1000 cannot hold level 10"
        except BudgetExceededError as e:
            assert e.feasible == 4
    finally:
        if previous is None:
            os.environ.pop("MAX_ATOMS", None)
        else:
            os.environ["MAX_ATOMS"] = previous
        reload_config()

    ten = homogeneous_family([ParamPoly((k,)) for k in range(10)], (Fraction(1, 10),) * 10)
    try:
        brute_force_measure(ten, Fraction(1), 7)
        assert False, "10^7 words exceed the brute-force budget"
    except BudgetExceededError as e:
        assert e.feasible == 6, e.feasible

    # the default schedule reaches depth 14 at every preset slope
    assert SweepConfig().depths == [1, 2, 4, 8, 12, 14]
    budget = EngineConfig().max_atoms
    for u in CARPET_SLOPES + [Fraction(5, 3)]:
        digits, _ = lattice_digits(carpet, u)
        assert feasible_depth(digits, 3, 8, budget) >= 14, u
    print("✅ Budgets are enforced before computing")


def test_entropy_values():
    """Closed-form entropies."""
    print("Testing entropy values...")
    carpet = carpet_family()
    estimate = entropy_dimension(exact_level_measure(carpet, Fraction(1), 1), 3, 1)
    assert abs(estimate.entropy_at(1) - H1_AT_ONE) < 1e-12
    assert abs(estimate.at(1) - H1_AT_ONE / math.log(3)) < 1e-12
    assert abs(estimate.at(1) - 1.4196) < 1e-4

    full = homogeneous_family([ParamPoly((0,)), ParamPoly((1,)), ParamPoly((2,))],
                              (Fraction(1, 3),) * 3)
    assert abs(dimension_profile(full, Fraction(1, 2), [4]).at(4) - 1.0) < 1e-12

    single = LatticeMeasure(1, 3, 1, np.array([5]), np.array([1]), 1)
    assert entropy_dimension(single, 3, 1).at(1) == 0.0
    empty = LatticeMeasure(1, 3, 1, np.array([], dtype=np.int64), np.array([], dtype=np.int64), 1)
    try:
        entropy_dimension(empty, 3, 1)
        assert False, "entropy of an empty measure is undefined"
    except IFSError:
        pass
    print("✅ Entropies match the closed forms")


def test_entropy_subadditivity():
    """d_2n <= d_n on the carpet slopes."""
    print("Testing entropy subadditivity...")
    carpet = carpet_family()
    for u in CARPET_SLOPES:
        profile = dimension_profile(carpet, u, [1, 2, 4, 8])
        for n in (1, 2, 4):
            assert profile.at(2 * n) <= profile.at(n) + 1e-12, (u, n)
        assert profile.similarity_dimension > profile.at(8)
    print("✅ d_2n <= d_n holds")


def test_collision_coupling():
    """Entropy drops below the no-collision line exactly when words collide."""
    print("Testing collision coupling...")
    carpet = carpet_family()
    for u in CARPET_SLOPES + [Fraction(1, 9)]:
        profile = dimension_profile(carpet, u, [1, 2, 3])
        for n in (1, 2, 3):
            collided = bool(overlap_search(carpet, u, n))
            below = profile.entropy_at(n) < no_collision_entropy(carpet, n) - 1e-9
            assert collided == below, f"u={u}, n={n}: collision={collided}, below={below}"
    print("✅ Collisions and entropy deficits coincide")


def test_monte_carlo_reproducible():
    """Fixed seeds give bitwise identical histograms."""
    print("Testing Monte-Carlo reproducibility...")
    carpet = carpet_family()
    first = monte_carlo_binned(carpet, 0.7071067811865475, 4, samples=50_000, seed=7)
    second = monte_carlo_binned(carpet, 0.7071067811865475, 4, samples=50_000, seed=7)
    other = monte_carlo_binned(carpet, 0.7071067811865475, 4, samples=50_000, seed=8)
    assert first.same_bins(second)
    assert not first.same_bins(other)
    assert abs(first.total_mass() - 1.0) < 1e-9

    generator = MultiplyWithCarry(42, lanes=16)
    draws = generator.uniform(1000)
    assert draws.min() >= 0.0 and draws.max() < 1.0
    assert np.array_equal(MultiplyWithCarry(42, lanes=16).next_uint32(40),
                          MultiplyWithCarry(42, lanes=16).next_uint32(40))
    print("✅ Monte-Carlo output is reproducible")


def test_monte_carlo_matches_exact():
    """Binned Monte-Carlo entropy within 3 standard errors of the exact value."""
    print("Testing Monte-Carlo against the exact measure...")
    carpet = carpet_family()
    n, samples = 3, 200_000
    exact = bin_lattice_measure(exact_level_measure(carpet, Fraction(1), n))
    exact_h = entropy_dimension(exact, 3, n).entropy_at(n)
    mc = monte_carlo_binned(carpet, 1.0, n, samples=samples, seed=42)
    mc_h = entropy_dimension(mc, 3, n).entropy_at(n)
    sigma = entropy_standard_error(exact, samples)
    print(f"   exact H_{n}={exact_h:.6f}, MC H_{n}={mc_h:.6f}, sigma={sigma:.2e}")
    assert abs(mc_h - exact_h) <= 3 * sigma
    assert abs(exact_h - entropy_dimension(exact_level_measure(carpet, Fraction(1), n), 3, n)
               .entropy_at(n)) < 1e-12
    print("✅ Monte-Carlo entropy agrees with the exact entropy")


def test_integrals():
    """Test-function integrals against the level-1 carpet measure at u = 1."""
    print("Testing integrals...")
    measure = exact_level_measure(carpet_family(), Fraction(1), 1)
    assert integrate_test_function(measure, PiecewiseLinear.constant(1), exact=True) == 1
    assert integrate_test_function(measure, PiecewiseLinear.identity(0, 4), exact=True) == 2
    hat = hat_function(1, Fraction(1, 2))
    assert integrate_test_function(measure, hat, exact=True) == Fraction(1, 4)
    assert abs(integrate_test_function(measure, hat) - 0.25) < 1e-15
    assert hat.lipschitz_constant == 2
    assert max_translation_speed(carpet_family()) == 2
    print("✅ Integrals match the atom sums")


def test_measure_exports():
    """CSV and binary exports reload."""
    print("Testing measure exports...")
    measure = exact_level_measure(carpet_family(), Fraction(1, 2), 3)
    huge = LatticeMeasure(2, 3, 3 ** 50, np.array([0, 3 ** 45], dtype=object),
                          np.array([1, 2 ** 70 - 1], dtype=object), 2 ** 70)
    with tempfile.TemporaryDirectory() as tmp:
        store = ResultStore(tmp)
        store.save_measure_binary("level3.bin", measure)
        assert store.load_measure_binary("level3.bin") == measure
        store.save_measure_binary("huge.bin", huge)
        assert store.load_measure_binary("huge.bin") == huge

        path = store.save_measure_csv("level3.csv", measure)
        with open(path, encoding="utf-8") as f:
            assert f.readline().strip() == "offset,numerator,denominator,position,mass"
        frame = store.load_measure_csv("level3.csv")
        assert list(frame["offset"]) == [int(k) for k in measure.offsets]
        assert sum(Fraction(w, d) for w, d in zip(frame["numerator"], frame["denominator"])) == 1
    print("✅ Exports round-trip exactly")


def main():
    """Run the measure-engine tests."""
    print("=== measure-engine Tests ===\n")
    tests = [
        test_level_one_atoms, test_normalization_and_lattice, test_oracle_equivalence,
        test_budgets, test_entropy_values, test_entropy_subadditivity, test_collision_coupling,
        test_monte_carlo_reproducible, test_monte_carlo_matches_exact, test_integrals,
        test_measure_exports,
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
    print(f"🎉 All {len(tests)} measure-engine tests passed")
    return True


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
