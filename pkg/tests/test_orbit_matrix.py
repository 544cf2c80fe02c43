from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest

from ternary48.designs import C6_SIZES, PARAMS_47, DesignParams, IncidenceStructure, ParameterError
from ternary48.equivalence import canonical_design
from ternary48.orbit_matrix import (
    OrbitMatrix,
    admissible_values,
    c4_value,
    canonical_form,
    equivalent,
    generate_orbit_matrices,
    load_appendix,
    validate_orbit_matrix,
)


def test_appendix_rows():
    assert load_appendix(1).s[0] == (0, 2, 0, 3, 0, 6, 6, 6, 0, 0, 0)
    assert load_appendix(2).s[5] == (1, 1, 1, 1, 1, 3, 1, 5, 3, 3, 3)
    with pytest.raises(ParameterError):
        load_appendix(5)


@pytest.mark.parametrize("idx", [1, 2, 3, 4])
def test_appendix_valid(idx):
    assert validate_orbit_matrix(load_appendix(idx)) == (True, None)


def test_mutation_names_c2():
    bad = load_appendix(1).with_entry(0, 1, 1)
    ok, why = validate_orbit_matrix(bad)
    assert not ok and why.startswith("C2") and "row 0" in why


@pytest.mark.parametrize("idx", [1, 2, 3, 4])
def test_every_single_mutation_caught(idx):
    om = load_appendix(idx)
    for i, j in itertools.product(range(11), range(11)):
        for new in (om.s[i][j] - 1, om.s[i][j] + 1):
            ok, why = validate_orbit_matrix(om.with_entry(i, j, new))
            assert not ok and why[0] == "C" and why[1] in "12345"


def test_c1_and_c3_named():
    om = load_appendix(1)
    # a negative entry violates C1 before any counting equation
    assert validate_orbit_matrix(om.with_entry(0, 0, -1))[1].startswith("C1")
    # moving 3 between two size-6 columns of row 0 keeps the row sum but
    # leaves entries that are not multiples of 6
    rows = [list(r) for r in om.s]
    rows[0][5] -= 3
    rows[0][8] += 3
    ok, why = validate_orbit_matrix(OrbitMatrix(6, PARAMS_47, C6_SIZES, C6_SIZES, rows))
    assert not ok and why.startswith("C3")


def test_admissible_values_examples():
    assert admissible_values(6, 1, 6) == [0, 6]
    assert admissible_values(6, 3, 6) == [0, 2, 4, 6]
    assert admissible_values(6, 6, 6) == list(range(7))
    with pytest.raises(ParameterError):
        admissible_values(6, 4, 6)


def test_appendix_row_entries_admissible():
    om1 = load_appendix(1)
    assert all(x in (0, 6) for x in om1.s[0][5:])
    assert all(x % 2 == 0 for r in om1.s[3:5] for x in r[5:])


def test_c4_spot_value():
    assert c4_value(load_appendix(1), 0, 0) == 23 == 11 * 1 + 12


@pytest.mark.parametrize("idx", [1, 2, 3, 4])
def test_diagonal_c4_identity(idx):
    om = load_appendix(idx)
    big, small, s = om.block_sizes, om.point_sizes, om.s
    for i in range(11):
        lhs = sum(Fraction(big[i] * s[i][j] ** 2, small[j]) for j in range(11))
        assert lhs == 11 * big[i] + 12


def _fano_oracle_count() -> int:
    """Brute force: all 7x7 0/1 matrices with row sums 3 and pairwise row
    intersections 1, reduced by row and column permutations."""
    triples = [frozenset(t) for t in itertools.combinations(range(7), 3)]
    found = set()

    def rec(chosen, start):
        if len(chosen) == 7:
            m = np.zeros((7, 7), dtype=int)
            for r, t in enumerate(chosen):
                m[r, list(t)] = 1
            if (m.sum(axis=0) == 3).all():
                found.add(canonical_design(IncidenceStructure(m)).key())
            return
        for i in range(start, len(triples)):
            if all(len(triples[i] & c) == 1 for c in chosen):
                rec(chosen + [triples[i]], i + 1)

    rec([], 0)
    return len(found)


def test_generator_trivial_group_matches_bruteforce():
    oms = generate_orbit_matrices(DesignParams(7, 3, 1), 1, (1,) * 7, (1,) * 7)
    assert len(oms) == _fano_oracle_count() == 1
    m = np.array(oms[0].s)
    assert (m.sum(axis=1) == 3).all() and ((m @ m.T) == 2 * np.eye(7, dtype=int) + 1).all()


def test_generator_outputs_valid_and_invariant_under_size_order():
    params = DesignParams(19, 9, 4)
    sizes = (1, 3, 3, 3, 3, 3, 3)
    a = generate_orbit_matrices(params, 3, sizes, sizes)
    b = generate_orbit_matrices(params, 3, sizes[::-1], sizes[::-1])
    assert a == b and len(a) > 0
    for om in a:
        assert validate_orbit_matrix(om)[0]
        arr = om.array
        assert int((np.array(om.block_sizes)[:, None] * arr).sum()) == params.k * params.v


def test_generator_infeasible_is_empty():
    # an involution of the Fano plane fixes 3 points, never exactly 1
    params = DesignParams(7, 3, 1)
    assert generate_orbit_matrices(params, 2, (1, 2, 2, 2), (1, 2, 2, 2)) == []
    assert len(generate_orbit_matrices(params, 2, (1, 1, 1, 2, 2), (1, 1, 1, 2, 2))) == 1


def test_canonical_form_is_class_function():
    om = load_appendix(3)
    rng = np.random.default_rng(3)
    arr = om.array
    for _ in range(5):
        rows, cols = np.arange(11), np.arange(11)
        for lo, hi in ((1, 3), (3, 5), (5, 11)):
            rows[lo:hi] = rng.permutation(rows[lo:hi])
            cols[lo:hi] = rng.permutation(cols[lo:hi])
        moved = OrbitMatrix(6, PARAMS_47, C6_SIZES, C6_SIZES, arr[np.ix_(rows, cols)])
        assert canonical_form(moved) == canonical_form(om)
        assert equivalent(moved, om)
    assert not equivalent(load_appendix(1), load_appendix(2))
