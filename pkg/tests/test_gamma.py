from __future__ import annotations

import pytest

from ternary48.gamma import DISTINCT_COUNTS, gamma, gamma_union, parse_value_list


def test_parse_value_list():
    assert parse_value_list("1, 2, 5, ..., 9") == {1, 2, 5, 6, 7, 8, 9}
    assert parse_value_list("3") == {3}
    assert parse_value_list("4, ..., 4") == {4}


@pytest.mark.parametrize("text", ["..., 3", "3, ...", "9, ..., 2", "1, ..., ..., 3", "1, x"])
def test_parse_value_list_errors(text):
    with pytest.raises(ValueError):
        parse_value_list(text)


def test_set_sizes():
    # the printed list for OM1 has 164 values while its table entry says 165
    assert len(gamma(1)) == 164 == DISTINCT_COUNTS[1] - 1
    for i in (2, 3, 4):
        assert len(gamma(i)) == DISTINCT_COUNTS[i]
    assert gamma(2) == gamma(4)


def test_union():
    union = gamma_union()
    assert union == gamma(1) | gamma(2) | gamma(3) | gamma(4)
    assert len(union) == 181
    assert min(union) == 313 and max(union) == 560
    assert all(v % 1 == 0 and 1 <= v <= 4324 for v in union)
