from __future__ import annotations

import random
from fractions import Fraction

import pytest

from charnum.geometry import builtin_geometry
from charnum.gw import (
    InsufficientSeeds,
    SeedConflict,
    canonical_keys,
    gw_potential,
    parse_seed_records,
    sample_wdvv_residuals,
    wdvv_solve,
)
from charnum.seeds import default_gw_seeds, packaged_seed_text


def test_p2_classical_counts(gw_p2):
    # rational plane curves through 3d-1 points
    expected = {1: 1, 2: 1, 3: 12, 4: 620, 5: 87304}
    for d, n in expected.items():
        assert gw_p2.canonical_value((d,), (2,) * (3 * d - 1)) == n


def test_p2_positive_integers_to_degree_six():
    p2 = builtin_geometry("p2")
    tab = wdvv_solve(p2, default_gw_seeds(p2), 6)
    for d in range(1, 7):
        val = tab.canonical_value((d,), (2,) * (3 * d - 1))
        assert val.denominator == 1 and val > 0
    assert tab.canonical_value((6,), (2,) * 17) == 26312976


def test_quadric_counts(gw_quadric):
    assert gw_quadric.canonical_value((1, 1), (3, 3, 3)) == 1
    assert gw_quadric.canonical_value((2, 1), (3,) * 5) == 1
    assert gw_quadric.canonical_value((2, 2), (3,) * 7) == 12
    # multiple covers of a ruling contribute nothing through general points
    assert gw_quadric.canonical_value((2, 0), (3, 3, 3)) == 0
    assert gw_quadric.canonical_value((3, 0), (3,) * 5) == 0


def test_p3_classical_conic_counts():
    # space conics: none through 4 general points, one through 3 points and
    # 2 lines (plane + five-point conic), 92 meeting 8 general lines
    p3 = builtin_geometry("p3")
    tab = wdvv_solve(p3, default_gw_seeds(p3), 2)
    assert tab.canonical_value((1,), (2, 2, 2, 2)) == 2  # lines meeting 4 lines
    assert tab.canonical_value((2,), (3, 3, 3, 3)) == 0
    assert tab.canonical_value((2,), (2, 2, 3, 3, 3)) == 1
    assert tab.canonical_value((2,), (2,) * 8) == 92
    rng = random.Random(17)
    for inst, resid in sample_wdvv_residuals(p3, tab, 25, rng):
        assert resid == 0, inst.describe()


def test_quadric_swap_symmetry(gw_quadric):
    for (beta, key), val in gw_quadric.entries.items():
        assert gw_quadric.canonical_value((beta[1], beta[0]), key) == val


def test_divisor_and_string_lookup(gw_p2):
    base = gw_p2.lookup((2,), [2] * 5)
    assert gw_p2.lookup((2,), [1] + [2] * 5) == 2 * base
    assert gw_p2.lookup((2,), [0] + [2] * 5) == 0
    assert gw_p2.lookup((2,), [1, 1] + [2] * 5) == 4 * base


def test_dimension_gate(gw_p2):
    assert gw_p2.lookup((2,), [2] * 4) == 0
    assert gw_p2.lookup((2,), [2] * 6) == 0


def test_overdetermination_sample(gw_p2, gw_quadric):
    rng = random.Random(1)
    for geom_table in (gw_p2, gw_quadric):
        for inst, resid in sample_wdvv_residuals(geom_table.geom, geom_table, 25, rng):
            assert resid == 0, inst.describe()


def test_insufficient_seeds_reported():
    p2 = builtin_geometry("p2")
    with pytest.raises(InsufficientSeeds):
        wdvv_solve(p2, {}, 2)


def test_seed_conflict_reported():
    # corrupt one Gr(2,4) degree-1 value whose consistency IS visible to
    # associativity (a sigma21-bearing key)
    g = builtin_geometry("gr24")
    seeds = default_gw_seeds(g)
    seeds[((1,), (2, 4, 4))] = Fraction(7)
    with pytest.raises(SeedConflict, match="instance"):
        wdvv_solve(g, seeds, 1)


def test_gr24_degree1_from_packaged_seeds():
    g = builtin_geometry("gr24")
    tab = wdvv_solve(g, default_gw_seeds(g), 1)
    # all 16 canonical keys present and matching the data file
    seeds = parse_seed_records(packaged_seed_text("gr24-genus0-d1"), g)
    for key, val in seeds.items():
        assert tab.entries[key] == val
    rng = random.Random(9)
    for inst, resid in sample_wdvv_residuals(g, tab, 40, rng):
        assert resid == 0, inst.describe()


def test_gr24_degree2_insufficiency_is_reported():
    # pure sigma_2/sigma_{1,1} strata only occur in paired sums, so degree 2
    # is not determined by degree-1 data; the solver must say so
    g = builtin_geometry("gr24")
    with pytest.raises(InsufficientSeeds):
        wdvv_solve(g, default_gw_seeds(g), 2)


def test_canonical_keys_p2():
    p2 = builtin_geometry("p2")
    assert canonical_keys(p2, (2,)) == [(2,) * 5]


def test_gw_potential_entries(gw_p2):
    pot = gw_potential(gw_p2)
    assert pot.coeff((1,), (2,)) == 1
    assert pot.coeff((3,), (8,)) == 12
    empty = gw_potential(wdvv_solve(builtin_geometry("p2"), {((1,), (2, 2)): Fraction(1)}, 1))
    assert empty.coeff((1,), (2,)) == 1


def test_gw_potential_zero_table():
    from charnum.gw import GWTable

    pot = gw_potential(GWTable(builtin_geometry("p2"), 2))
    assert pot.is_zero()


def test_seed_record_validation():
    p2 = builtin_geometry("p2")
    with pytest.raises(ValueError, match="divisor"):
        parse_seed_records("1;0,1,2;1\n", p2)
    with pytest.raises(ValueError, match="fundamental"):
        parse_seed_records("1;1,0,2;1\n", p2)
