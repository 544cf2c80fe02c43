from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ternary48.codes import (
    TernaryCode,
    code_from_design,
    golay12,
    is_self_dual,
    max_self_orthogonal_dim,
    random_self_orthogonal_code,
    tetracode,
)
from ternary48.designs import PARAMS_47, DesignParams, IncidenceStructure, ParameterError, paley_type1_design
from ternary48.gf3 import TritMatrix, mat_mul
from ternary48.weights import weight_distribution_bruteforce


@pytest.fixture(scope="module")
def paley47():
    return code_from_design(paley_type1_design(47))


def test_tetracode_self_dual():
    c = tetracode()
    assert (c.n, c.k) == (4, 2)
    assert c.self_dual and is_self_dual(c)


def test_non_self_dual_examples():
    assert not is_self_dual(TernaryCode.from_generator([[1, 1, 1, 0]]))
    assert not is_self_dual(TernaryCode.from_generator([[1, 0], [0, 1]]))
    assert not is_self_dual(TernaryCode.from_generator([[1, 1, 0, 0], [0, 0, 1, 1]]))


def test_golay_self_dual():
    c = golay12()
    assert (c.n, c.k) == (12, 6) and c.self_dual


def test_generator_is_canonical():
    a = TernaryCode.from_generator([[1, 1, 1, 0], [0, 1, 2, 1]])
    b = TernaryCode.from_generator([[1, 2, 0, 1], [2, 2, 2, 0]])
    assert a == b and hash(a) == hash(b)
    assert a.generator == b.generator


def test_paley_code(paley47):
    c = paley47
    assert (c.n, c.k) == (48, 24)
    assert c.self_dual and is_self_dual(c)
    assert c.contains(np.ones((1, 48), dtype=np.uint8)).all()


def test_paley_code_has_all_one_column_last(paley47):
    d = paley_type1_design(47)
    rows = np.hstack([d.matrix, np.ones((47, 1), dtype=np.uint8)])
    assert paley47.contains(rows).all()
    g = paley47.generator.to_array().astype(int)
    assert (mat_mul(paley47.generator, paley47.generator.transpose()).is_zero())
    assert g.shape == (24, 48)


def test_relabeled_design_same_weights():
    d = paley_type1_design(11)
    params = DesignParams(11, 5, 2)
    rng = np.random.default_rng(3)
    # rank of [M|1] over GF(3) for Paley(11) is 6
    base = weight_distribution_bruteforce(code_from_design(d, params))
    for _ in range(5):
        img = d.permuted(rng.permutation(11), rng.permutation(11))
        assert np.array_equal(weight_distribution_bruteforce(code_from_design(img, params)), base)


def test_non_design_rejected():
    m = paley_type1_design(47).matrix.copy()
    m[0, 0] ^= 1
    with pytest.raises(ParameterError):
        code_from_design(IncidenceStructure(m))
    with pytest.raises(ParameterError):
        code_from_design(IncidenceStructure(m[:46]), PARAMS_47)


def test_permuted_contains_image():
    c = golay12()
    rng = np.random.default_rng(5)
    perm = rng.permutation(12)
    signs = rng.integers(1, 3, size=12)
    img = c.permuted(perm, signs)
    g = c.generator.to_array().astype(np.int64) * signs
    words = np.empty_like(g)
    words[:, perm] = g
    assert img.contains(words % 3).all()
    assert img.self_dual


@pytest.mark.parametrize("n", range(1, 25))
def test_max_self_orthogonal_dim(n):
    k = max_self_orthogonal_dim(n)
    if k == 0:
        with pytest.raises(ParameterError):
            random_self_orthogonal_code(n, 1, np.random.default_rng(0))
        return
    c = random_self_orthogonal_code(n, k, np.random.default_rng(n))
    assert c.k == k
    with pytest.raises(ParameterError):
        random_self_orthogonal_code(n, k + 1, np.random.default_rng(0))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 16), st.integers(0, 2**32 - 1))
def test_random_self_orthogonal(n, seed):
    k = max_self_orthogonal_dim(n)
    if k == 0:
        return
    rng = np.random.default_rng(seed)
    c = random_self_orthogonal_code(n, int(rng.integers(1, k + 1)), rng)
    g = c.generator
    assert mat_mul(g, g.transpose()).is_zero()
    assert (c.generator.row_weights() % 3 == 0).all()
    assert c.self_dual == (2 * c.k == n)


def test_contains_matches_row_space():
    c = golay12()
    rng = np.random.default_rng(9)
    msg = rng.integers(0, 3, size=(50, 6))
    words = (msg @ c.generator.to_array().astype(np.int64)) % 3
    assert c.contains(words).all()
    noise = words.copy()
    noise[:, 0] = (noise[:, 0] + 1) % 3
    assert not c.contains(noise).any()
    assert isinstance(c.parity_check(), TritMatrix)
