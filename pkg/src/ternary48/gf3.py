"""
Packed linear algebra over GF(3).

Every trit is stored in two bit planes: bit ``c`` of ``ones`` is set when the
entry in column ``c`` equals 1, bit ``c`` of ``twos`` when it equals 2.  A
column therefore occupies a fixed two-bit slot (one bit in each plane) and the
pair (1, 1) never occurs.  Rows are padded to a whole number of 64-bit words,
so a length-48 row is exactly two machine words.

With this layout addition is six bitwise operations on whole words::

    t    = (a1 | b2) ^ (a2 | b1)
    one  = (a2 | b2) ^ t
    two  = (a1 | b1) ^ t

negation swaps the planes and the Hamming weight is ``popcount(a1 | a2)``.

A plain ``uint8`` reference implementation (``*_naive``) lives at the bottom
of the module; the tests use it as an oracle for the packed kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

WORD = 64
_U1 = np.uint64(1)


class ShapeError(ValueError):
    """Raised when matrix dimensions do not conform."""


def n_words(cols: int) -> int:
    return max(1, (cols + WORD - 1) // WORD)


# ---------------------------------------------------------------------------
# word-parallel kernels (operate on uint64 arrays of any matching shape)
# ---------------------------------------------------------------------------


def add_planes(a1, a2, b1, b2):
    """Return the planes of ``a + b``."""
    t = (a1 | b2) ^ (a2 | b1)
    return (a2 | b2) ^ t, (a1 | b1) ^ t


def sub_planes(a1, a2, b1, b2):
    """Return the planes of ``a - b``."""
    return add_planes(a1, a2, b2, b1)


def weight_planes(a1, a2):
    """Hamming weight of packed rows; sums over the last (word) axis."""
    return np.bitwise_count(a1 | a2).sum(axis=-1, dtype=np.int64)


def dot_planes(a1, a2, b1, b2):
    """Inner products mod 3 of packed rows (broadcasting, last axis = words)."""
    plus = np.bitwise_count((a1 & b1) | (a2 & b2)).sum(axis=-1, dtype=np.int64)
    minus = np.bitwise_count((a1 & b2) | (a2 & b1)).sum(axis=-1, dtype=np.int64)
    return (plus - minus) % 3


def pack(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pack a 2-D array with entries in {0,1,2} into (ones, twos) planes."""
    values = np.asarray(values)
    rows, cols = values.shape
    w = n_words(cols)
    padded = np.zeros((rows, w * WORD), dtype=np.uint8)
    padded[:, :cols] = values
    weights = _U1 << np.arange(WORD, dtype=np.uint64)
    blocks = padded.reshape(rows, w, WORD)
    ones = ((blocks == 1).astype(np.uint64) * weights).sum(axis=-1, dtype=np.uint64)
    twos = ((blocks == 2).astype(np.uint64) * weights).sum(axis=-1, dtype=np.uint64)
    return ones, twos


def unpack(ones: np.ndarray, twos: np.ndarray, cols: int) -> np.ndarray:
    """Inverse of :func:`pack`."""
    shifts = np.arange(WORD, dtype=np.uint64)
    b1 = ((ones[..., None] >> shifts) & _U1).astype(np.uint8)
    b2 = ((twos[..., None] >> shifts) & _U1).astype(np.uint8)
    out = b1 + 2 * b2
    out = out.reshape(*ones.shape[:-1], ones.shape[-1] * WORD)
    return out[..., :cols]


# ---------------------------------------------------------------------------
# TritMatrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TritMatrix:
    """Dense matrix over GF(3) in packed two-plane layout.

    Instances are treated as immutable; every operation returns a new matrix.
    """

    rows: int
    cols: int
    ones: np.ndarray
    twos: np.ndarray

    @classmethod
    def from_array(cls, values) -> "TritMatrix":
        arr = np.asarray(values, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2:
            raise ShapeError(f"expected a 2-D array, got shape {arr.shape}")
        arr = (arr % 3).astype(np.uint8)
        ones, twos = pack(arr)
        return cls(arr.shape[0], arr.shape[1], ones, twos)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "TritMatrix":
        w = n_words(cols)
        z = np.zeros((rows, w), dtype=np.uint64)
        return cls(rows, cols, z, z.copy())

    @classmethod
    def identity(cls, n: int) -> "TritMatrix":
        return cls.from_array(np.eye(n, dtype=np.uint8))

    def to_array(self) -> np.ndarray:
        return unpack(self.ones, self.twos, self.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __eq__(self, other) -> bool:
        if not isinstance(other, TritMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.ones, other.ones)
            and np.array_equal(self.twos, other.twos)
        )

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.ones.tobytes(), self.twos.tobytes()))

    def __repr__(self) -> str:
        return f"TritMatrix({self.rows}x{self.cols})"

    def __str__(self) -> str:
        return "\n".join("".join(map(str, r)) for r in self.to_array())

    def row_weights(self) -> np.ndarray:
        return weight_planes(self.ones, self.twos)

    def take_rows(self, idx) -> "TritMatrix":
        idx = np.asarray(idx, dtype=np.int64)
        return TritMatrix(len(idx), self.cols, self.ones[idx].copy(), self.twos[idx].copy())

    def take_cols(self, idx) -> "TritMatrix":
        return TritMatrix.from_array(self.to_array()[:, list(idx)])

    def transpose(self) -> "TritMatrix":
        return TritMatrix.from_array(self.to_array().T)

    T = property(transpose)

    def hstack(self, other: "TritMatrix") -> "TritMatrix":
        if self.rows != other.rows:
            raise ShapeError(f"row counts differ: {self.rows} vs {other.rows}")
        return TritMatrix.from_array(np.hstack([self.to_array(), other.to_array()]))

    def vstack(self, other: "TritMatrix") -> "TritMatrix":
        if self.cols != other.cols:
            raise ShapeError(f"column counts differ: {self.cols} vs {other.cols}")
        return TritMatrix(
            self.rows + other.rows,
            self.cols,
            np.vstack([self.ones, other.ones]),
            np.vstack([self.twos, other.twos]),
        )

    def __add__(self, other: "TritMatrix") -> "TritMatrix":
        if self.shape != other.shape:
            raise ShapeError(f"{self.shape} + {other.shape}")
        o, t = add_planes(self.ones, self.twos, other.ones, other.twos)
        return TritMatrix(self.rows, self.cols, o, t)

    def __neg__(self) -> "TritMatrix":
        return TritMatrix(self.rows, self.cols, self.twos.copy(), self.ones.copy())

    def __sub__(self, other: "TritMatrix") -> "TritMatrix":
        return self + (-other)

    def scale(self, c: int) -> "TritMatrix":
        c %= 3
        if c == 0:
            return TritMatrix.zeros(self.rows, self.cols)
        return self if c == 1 else -self

    def __matmul__(self, other: "TritMatrix") -> "TritMatrix":
        return mat_mul(self, other)

    def is_zero(self) -> bool:
        return not (self.ones.any() or self.twos.any())


def mat_mul(a: TritMatrix, b: TritMatrix) -> TritMatrix:
    """Exact product ``a @ b`` over GF(3)."""
    if a.cols != b.rows:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    bt = b.transpose()
    out = np.empty((a.rows, b.cols), dtype=np.uint8)
    # one output row at a time keeps the temporaries at (b.cols, words)
    for r in range(a.rows):
        out[r] = dot_planes(a.ones[r], a.twos[r], bt.ones, bt.twos)
    return TritMatrix.from_array(out)


def rref(m: TritMatrix) -> tuple[TritMatrix, int, list[int]]:
    """Reduced row-echelon form with first-nonzero pivoting.

    Returns ``(R, rank, pivots)``; ``R`` has the same shape as ``m`` with the
    zero rows at the bottom.
    """
    if m.rows == 0 or m.cols == 0:
        raise ShapeError("rref of an empty matrix")
    ones = m.ones.copy()
    twos = m.twos.copy()
    pivots: list[int] = []
    r = 0
    for col in range(m.cols):
        if r == m.rows:
            break
        w, bit = divmod(col, WORD)
        mask = _U1 << np.uint64(bit)
        nz = ((ones[r:, w] | twos[r:, w]) & mask) != 0
        hits = np.flatnonzero(nz)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            ones[[r, p]] = ones[[p, r]]
            twos[[r, p]] = twos[[p, r]]
        if twos[r, w] & mask:
            ones[r], twos[r] = twos[r].copy(), ones[r].copy()
        p1, p2 = ones[r], twos[r]
        is1 = (ones[:, w] & mask) != 0
        is2 = (twos[:, w] & mask) != 0
        is1[r] = False
        if is1.any():
            ones[is1], twos[is1] = sub_planes(ones[is1], twos[is1], p1, p2)
        if is2.any():
            ones[is2], twos[is2] = add_planes(ones[is2], twos[is2], p1, p2)
        pivots.append(col)
        r += 1
    return TritMatrix(m.rows, m.cols, ones, twos), len(pivots), pivots


def rank(m: TritMatrix) -> int:
    return rref(m)[1]


def row_basis(m: TritMatrix) -> TritMatrix:
    """Nonzero rows of the reduced echelon form (a canonical row-space basis)."""
    r, k, _ = rref(m)
    return r.take_rows(range(k))


def kernel_basis(m: TritMatrix) -> TritMatrix:
    """Basis (as rows) of the right null space ``{x : m x = 0}``.

    The result has ``m.cols - rank(m)`` rows; an empty ``0 x cols`` matrix is
    returned for full column rank.
    """
    r, k, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    red = r.to_array()[:k].astype(np.int64)
    basis = np.zeros((len(free), m.cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        basis[i, pivots] = -red[:, f]
    if not free:
        return TritMatrix.zeros(0, m.cols)
    return TritMatrix.from_array(basis % 3)


def in_row_space(basis: TritMatrix, vectors: TritMatrix) -> np.ndarray:
    """Boolean mask: which rows of ``vectors`` lie in the row space of ``basis``."""
    r0 = rank(basis)
    out = np.empty(vectors.rows, dtype=bool)
    for i in range(vectors.rows):
        out[i] = rank(basis.vstack(vectors.take_rows([i]))) == r0
    return out


def weight(v) -> int:
    """Number of nonzero entries of a trit vector (array-like over {0,1,2})."""
    return int(np.count_nonzero(np.asarray(v) % 3))


# ---------------------------------------------------------------------------
# unpacked reference implementation (test oracle)
# ---------------------------------------------------------------------------

_INV = np.array([0, 1, 2], dtype=np.int64)  # 1^-1 = 1, 2^-1 = 2


def rref_naive(a) -> tuple[np.ndarray, int, list[int]]:
    a = np.array(a, dtype=np.int64) % 3
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if a[i, c] != 0), None)
        if p is None:
            continue
        a[[r, p]] = a[[p, r]]
        a[r] = (a[r] * _INV[a[r, c]]) % 3
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % 3
        pivots.append(c)
        r += 1
    return a, len(pivots), pivots


def matmul_naive(a, b) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            s = 0
            for t in range(a.shape[1]):
                s += int(a[i, t]) * int(b[t, j])
            out[i, j] = s % 3
    return out


def add_naive(a, b) -> np.ndarray:
    return (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % 3
