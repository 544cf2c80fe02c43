from __future__ import annotations

import json

import numpy as np
import pytest

from ternary48.codes import TernaryCode, code_from_design, golay12, random_self_orthogonal_code, tetracode
from ternary48.designs import paley_type1_design
from ternary48.weights import (
    CostGuardError,
    WeightReport,
    all_codewords,
    classification_label,
    classify,
    count_weight,
    count_weights,
    low_weight_words,
    min_weight,
    support_one_design_check,
    weight_distribution_bruteforce,
)


def random_code(rng: np.random.Generator) -> TernaryCode:
    n = int(rng.integers(4, 21))
    k = int(rng.integers(1, min(n, 9)))
    while True:
        code = TernaryCode.from_generator(rng.integers(0, 3, size=(k, n)))
        if code.k == k:
            return code


@pytest.fixture(scope="module")
def paley47():
    return code_from_design(paley_type1_design(47))


def test_tetracode():
    c = tetracode()
    assert min_weight(c) == 3
    assert count_weights(c, 4) == {1: 0, 2: 0, 3: 8, 4: 0}


def test_golay():
    c = golay12()
    assert min_weight(c) == 6
    assert count_weights(c, 12) == {w: a for w, a in zip(range(1, 13), [0] * 5 + [264, 0, 0, 440, 0, 0, 24])}
    rep = classify(c)
    assert rep.classification == "extremal" and rep.beta is None


def test_random_codes_against_bruteforce():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        code = random_code(rng)
        dist = weight_distribution_bruteforce(code)
        d = int(np.flatnonzero(dist[1:])[0]) + 1
        assert min_weight(code) == d
        top = int(rng.integers(d, code.n + 1))
        counts = count_weights(code, top)
        assert [counts[w] for w in range(1, top + 1)] == dist[1 : top + 1].tolist()


def test_low_weight_words_are_all_words():
    rng = np.random.default_rng(7)
    for _ in range(20):
        code = random_code(rng)
        words = all_codewords(code)
        wts = np.count_nonzero(words, axis=1)
        w = int(wts[wts > 0].min()) + int(rng.integers(0, 3))
        if w > code.n:
            continue
        got = low_weight_words(code, w)
        want = words[wts == w].astype(np.uint8)
        want = want[np.lexsort(want.T[::-1])]
        assert np.array_equal(got, want)


def test_paley47_minimum_weight(paley47):
    assert min_weight(paley47) == 15
    rep = classify(paley47)
    assert rep.classification == "extremal"
    assert rep.counts[15] > 0 and rep.beta is None


def test_cost_guard(paley47):
    with pytest.raises(CostGuardError):
        count_weights(paley47, 18)
    with pytest.raises(CostGuardError):
        low_weight_words(paley47, 16)
    with pytest.raises(CostGuardError):
        all_codewords(paley47)


@pytest.mark.parametrize(
    ("n", "d", "label"),
    [(48, 15, "extremal"), (48, 12, "near_extremal"), (48, 9, "neither"), (12, 6, "extremal"), (13, 6, "neither")],
)
def test_classification_label(n, d, label):
    assert classification_label(n, d) == label


def test_sample_beta(om1):
    for rep in om1.reports:
        assert rep.n == 48 and rep.k == 24
        if rep.d == 12:
            assert rep.classification == "near_extremal"
            assert rep.counts[12] % 8 == 0 and rep.beta == rep.counts[12] // 8
            assert 1 <= rep.beta <= 4324


def test_sample_weight12_replication_equals_beta(om1):
    for code, rep in list(zip(om1.codes, om1.reports))[:3]:
        if rep.beta is None:
            continue
        ok, rep_counts = support_one_design_check(code, 12)
        assert ok and set(rep_counts.tolist()) == {rep.beta}


def _replication_bruteforce(code: TernaryCode, w: int) -> np.ndarray:
    words = all_codewords(code)
    words = words[np.count_nonzero(words, axis=1) == w]
    return (words != 0).sum(axis=0) // 2


def test_one_design_check_tetracode():
    ok, rep = support_one_design_check(tetracode(), 3)
    assert ok and rep.tolist() == [3, 3, 3, 3]


def test_one_design_check_against_bruteforce():
    rng = np.random.default_rng(11)
    seen_false = False
    for _ in range(30):
        code = random_self_orthogonal_code(8, 4, rng) if rng.random() < 0.5 else random_code(rng)
        dist = weight_distribution_bruteforce(code)
        for w in np.flatnonzero(dist[1:]) + 1:
            ok, rep = support_one_design_check(code, int(w))
            want = _replication_bruteforce(code, int(w))
            assert rep.tolist() == want.tolist()
            assert ok == (len(set(want.tolist())) == 1)
            seen_false |= not ok
    assert seen_false


def test_count_weight_matches_count_weights():
    c = golay12()
    assert count_weight(c, 9) == 440


def test_report_round_trip():
    rep = WeightReport(48, 24, 12, {12: 3200, 9: 0}, "near_extremal", 400)
    assert WeightReport.from_text(rep.to_text()) == rep
    assert WeightReport.from_json(rep.to_json()) == rep
    assert WeightReport.from_json(json.dumps(rep.to_json())) == rep
    empty = WeightReport(4, 2, 3, {}, "neither", None)
    assert WeightReport.from_text(empty.to_text()) == empty
