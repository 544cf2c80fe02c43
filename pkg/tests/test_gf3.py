from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ternary48.codes import augmented_design_matrix
from ternary48.designs import paley_type1_design
from ternary48.gf3 import (
    ShapeError,
    TritMatrix,
    add_naive,
    in_row_space,
    kernel_basis,
    mat_mul,
    matmul_naive,
    pack,
    rank,
    rref,
    rref_naive,
    unpack,
    weight,
)


def trit_arrays(max_side: int = 12):
    shapes = st.tuples(st.integers(1, max_side), st.integers(1, max_side))
    return shapes.flatmap(lambda s: arrays(np.uint8, s, elements=st.integers(0, 2)))


# -- examples ---------------------------------------------------------------


def test_rref_identity():
    r, k, piv = rref(TritMatrix.identity(3))
    assert k == 3 and piv == [0, 1, 2]
    assert np.array_equal(r.to_array(), np.eye(3))


def test_rref_proportional_rows():
    assert rank(TritMatrix.from_array([[1, 2], [2, 1]])) == 1


def test_rref_empty_is_error():
    with pytest.raises(ShapeError):
        rref(TritMatrix.zeros(0, 3))


def test_mat_mul_examples():
    a = TritMatrix.from_array([[1, 2, 0], [2, 2, 1]])
    assert mat_mul(a, TritMatrix.identity(3)) == a
    assert mat_mul(TritMatrix.from_array([[1, 1]]), TritMatrix.from_array([[1], [2]])).to_array().tolist() == [[0]]


def test_mat_mul_shape_error():
    with pytest.raises(ShapeError):
        mat_mul(TritMatrix.identity(2), TritMatrix.identity(3))


def test_kernel_identity_empty():
    assert kernel_basis(TritMatrix.identity(4)).rows == 0


def test_kernel_of_all_ones_row_matches_enumeration():
    ker = kernel_basis(TritMatrix.from_array([[1, 1, 1]])).to_array().astype(int)
    assert ker.shape == (2, 3)
    assert not ((ker @ np.ones(3, dtype=int)) % 3).any()
    # the span of the basis is exactly the set of orthogonal vectors among all 27
    span = {tuple((a * ker[0] + b * ker[1]) % 3) for a in range(3) for b in range(3)}
    oracle = {v for v in itertools.product(range(3), repeat=3) if sum(v) % 3 == 0}
    assert span == oracle


def test_paley_generator_self_orthogonal_and_kernel_is_row_space():
    g = augmented_design_matrix(paley_type1_design(47))
    assert mat_mul(g, g.transpose()).is_zero()
    assert rank(g) == 24
    ker = kernel_basis(g)  # kernel of g as a map = dual of the row space
    assert ker.rows == 24
    assert in_row_space(g, ker).all()
    # independent check: rref on the transpose has the same rank
    assert rref_naive(g.to_array().T)[1] == 24


def test_weight():
    assert weight([0, 1, 2, 0, 2]) == 3


# -- properties -------------------------------------------------------------


@given(trit_arrays(70))
@settings(max_examples=60, deadline=None)
def test_pack_roundtrip(a):
    ones, twos = pack(a)
    assert np.array_equal(unpack(ones, twos, a.shape[1]), a)
    m = TritMatrix.from_array(a)
    assert np.array_equal(m.to_array(), a)
    assert m.transpose().transpose() == m


@given(trit_arrays())
@settings(max_examples=80, deadline=None)
def test_rref_matches_naive(a):
    r, k, piv = rref(TritMatrix.from_array(a))
    rn, kn, pivn = rref_naive(a)
    assert (k, piv) == (kn, pivn)
    assert np.array_equal(r.to_array(), rn)
    assert all(x < y for x, y in zip(piv, piv[1:]))


@given(trit_arrays())
@settings(max_examples=80, deadline=None)
def test_rank_of_transpose(a):
    m = TritMatrix.from_array(a)
    assert rank(m) == rank(m.transpose())


@given(trit_arrays())
@settings(max_examples=80, deadline=None)
def test_kernel_annihilates(a):
    m = TritMatrix.from_array(a)
    ker = kernel_basis(m)
    assert ker.rows == m.cols - rank(m)
    if ker.rows:
        assert mat_mul(m, ker.transpose()).is_zero()
        assert rank(ker) == ker.rows


@given(st.data())
@settings(max_examples=60, deadline=None)
def test_mat_mul_associative(data):
    p, q, r, s = (data.draw(st.integers(1, 8)) for _ in range(4))
    mk = lambda sh: TritMatrix.from_array(data.draw(arrays(np.uint8, sh, elements=st.integers(0, 2))))
    a, b, c = mk((p, q)), mk((q, r)), mk((r, s))
    assert mat_mul(mat_mul(a, b), c) == mat_mul(a, mat_mul(b, c))


def test_kernels_agree_with_naive_on_1000_random_matrices():
    rng = np.random.default_rng(7)
    for t in range(1000):
        r, c = rng.integers(1, 65, size=2)
        a = rng.integers(0, 3, size=(r, c))
        b = rng.integers(0, 3, size=(r, c))
        ma, mb = TritMatrix.from_array(a), TritMatrix.from_array(b)
        assert np.array_equal((ma + mb).to_array(), add_naive(a, b))
        assert np.array_equal((-ma).to_array(), (-a) % 3)
        assert np.array_equal((ma - mb).to_array(), (a - b) % 3)
        assert np.array_equal(ma.scale(2).to_array(), (2 * a) % 3)
        assert np.array_equal(ma.row_weights(), np.count_nonzero(a, axis=1))
        assert np.array_equal(ma.transpose().to_array(), a.T)
        bt = rng.integers(0, 3, size=(c, rng.integers(1, 65)))
        prod = mat_mul(ma, TritMatrix.from_array(bt)).to_array()
        if t % 10 == 0:
            small = (slice(0, 12), slice(0, 12))
            assert np.array_equal(
                mat_mul(TritMatrix.from_array(a[small[0]]), TritMatrix.from_array(bt[:, small[1]])).to_array(),
                matmul_naive(a[small[0]], bt[:, small[1]]),
            )
        assert np.array_equal(prod, (a @ bt) % 3)
        if t % 4 == 0:
            rr, k, piv = rref(ma)
            rn, kn, pivn = rref_naive(a)
            assert k == kn and piv == pivn and np.array_equal(rr.to_array(), rn)
