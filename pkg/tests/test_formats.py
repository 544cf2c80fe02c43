from __future__ import annotations

import pytest

from ternary48.codes import golay12, tetracode
from ternary48.designs import DesignParams, paley_type1_design
from ternary48.formats import (
    FormatError,
    dump_code,
    dump_design,
    dump_orbit_matrix,
    dump_report,
    load_code,
    load_codes,
    load_designs,
    load_orbit_matrices,
    load_orbit_matrix,
    load_reports,
)
from ternary48.orbit_matrix import load_appendix
from ternary48.weights import WeightReport


def test_orbit_matrix_round_trip():
    oms = [load_appendix(i) for i in range(1, 5)]
    text = "\n".join(dump_orbit_matrix(om) for om in oms)
    back = load_orbit_matrices(text)
    assert [(b.s == om.s) for b, om in zip(back, oms)] == [True] * 4
    assert all(b.block_sizes == om.block_sizes and b.point_sizes == om.point_sizes for b, om in zip(back, oms))
    assert load_orbit_matrix("# comment\n" + dump_orbit_matrix(oms[0])).s == oms[0].s


def test_design_round_trip():
    p = DesignParams(11, 5, 2)
    d = paley_type1_design(11)
    text = dump_design(d, p, "# source X choice 1 2") + "\n" + dump_design(d, p)
    recs = load_designs(text)
    assert [r.design for r in recs] == [d, d]
    assert recs[0].provenance == "# source X choice 1 2"
    assert recs[1].provenance is None and recs[0].params == p


def test_code_round_trip():
    codes = [tetracode(), golay12()]
    assert load_codes("\n".join(dump_code(c) for c in codes)) == codes
    assert load_code(dump_code(golay12())).self_dual


def test_report_round_trip():
    reps = [WeightReport(48, 24, 12, {12: 3200}, "near_extremal", 400), WeightReport(4, 2, 3, {3: 8}, "neither")]
    assert load_reports("\n".join(dump_report(r) for r in reps)) == reps


@pytest.mark.parametrize(
    "text",
    [
        "47 23 11\n",  # too short
        "47 23 11 6 1\n1\n1\n0\n",  # header
        "7 3 1 1\n1 1\n1 1\nx 1\n1 1\n",  # non-integer
        "7 3 1 1\n1 1\n1 1\n1 1\n",  # row count
    ],
)
def test_bad_orbit_matrix(text):
    with pytest.raises(FormatError):
        load_orbit_matrices(text)


def test_one_orbit_matrix_expected():
    text = dump_orbit_matrix(load_appendix(1))
    with pytest.raises(FormatError):
        load_orbit_matrix(text + "\n" + text)


@pytest.mark.parametrize(
    "text",
    ["3 1\n110\n", "3 1 0\n120\n", "3 1 0\n11\n", "a b c\n100\n"],
)
def test_bad_design(text):
    with pytest.raises(FormatError):
        load_designs(text)


@pytest.mark.parametrize(
    "text",
    ["4\n1110\n", "4 2\n1110\n", "4 2\n1110\n013\n", "4 2\n1110\n2220\n", "4 2\n1110\n01213\n"],
)
def test_bad_code(text):
    with pytest.raises(FormatError):
        load_codes(text)


def test_one_code_expected():
    with pytest.raises(FormatError):
        load_code("")
