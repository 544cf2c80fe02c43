"""Acceptance criteria, one test each.

Criteria 1-7 (fast tier) always run.  Criteria 8-13 (full tier) are marked
``full`` and run with ``TERNARY48_FULL=1`` or ``-m full``.  The full-tier
expansions honour ``TERNARY48_BUDGET`` (seconds per orbit matrix) and
``TERNARY48_THREADS``.  Each test prints a PASS or FAIL line, repeated in the
terminal summary.
"""

from __future__ import annotations

import os

import pytest

from ternary48 import verify

from .conftest import CRITERION_LINES

THREADS = int(os.environ.get("TERNARY48_THREADS", "1"))
BUDGET = float(os.environ["TERNARY48_BUDGET"]) if os.environ.get("TERNARY48_BUDGET") else None


def check(result: verify.CriterionResult) -> None:
    line = result.line()
    print(line)
    CRITERION_LINES.append(line)
    assert result.passed, line


@pytest.mark.parametrize("criterion", verify.FAST, ids=lambda c: f"criterion_{c.number}")
def test_fast(criterion):
    check(criterion())


@pytest.mark.full
def test_criterion_8():
    check(verify.criterion_8())


@pytest.mark.full
@pytest.mark.parametrize("number", [9, 10, 11])
def test_full_run_criteria(number):
    fn = getattr(verify, f"criterion_{number}")
    check(fn(threads=THREADS, budget=BUDGET))


@pytest.mark.full
def test_criterion_12():
    check(verify.criterion_12())


@pytest.mark.full
def test_criterion_13():
    check(verify.criterion_13())
