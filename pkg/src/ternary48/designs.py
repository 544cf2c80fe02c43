"""
Incidence structures, symmetric-design validation, cyclic actions and the
Paley constructions.

Rows of an incidence matrix are blocks and columns are points.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

import numpy as np
import sympy


class ParameterError(ValueError):
    """Raised for inputs that violate an operation's preconditions."""


@dataclass(frozen=True)
class DesignParams:
    v: int
    k: int
    lam: int

    def __post_init__(self):
        if min(self.v, self.k) <= 0 or self.lam < 0:
            raise ParameterError(f"non-positive design parameters {self}")
        if self.lam * (self.v - 1) != self.k * (self.k - 1):
            raise ParameterError(f"{self} violates lambda(v-1) = k(k-1)")


PARAMS_47 = DesignParams(47, 23, 11)


@dataclass(frozen=True, eq=False)
class IncidenceStructure:
    """A ``b x v`` 0/1 matrix; rows are blocks."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=np.uint8)
        if m.ndim != 2:
            raise ParameterError("incidence matrix must be 2-D")
        if m.size and m.max() > 1:
            raise ParameterError("incidence matrix entries must be 0 or 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def b(self) -> int:
        return self.matrix.shape[0]

    @property
    def v(self) -> int:
        return self.matrix.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, IncidenceStructure):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash(self.matrix.tobytes())

    def permuted(self, point_perm, block_perm) -> "IncidenceStructure":
        """Image under a relabeling: point ``p`` becomes ``point_perm[p]``,
        block ``B`` becomes ``block_perm[B]``."""
        out = np.empty_like(self.matrix)
        out[np.ix_(np.asarray(block_perm), np.asarray(point_perm))] = self.matrix
        return IncidenceStructure(out)

    def blocks(self) -> list[frozenset[int]]:
        return [frozenset(np.flatnonzero(r).tolist()) for r in self.matrix]


def validate_symmetric_design(d: IncidenceStructure, p: DesignParams) -> bool:
    """True iff ``d`` is a symmetric 2-(v,k,lambda) design."""
    if d.v != p.v or d.b != p.v:
        raise ParameterError(f"design is {d.b}x{d.v}, parameters need {p.v}x{p.v}")
    m = d.matrix.astype(np.int64)
    if not np.all(m.sum(axis=1) == p.k):
        return False
    gram = m @ m.T
    target = (p.k - p.lam) * np.eye(p.v, dtype=np.int64) + p.lam
    return bool(np.array_equal(gram, target))


# ---------------------------------------------------------------------------
# Paley constructions
# ---------------------------------------------------------------------------


def quadratic_character(q: int) -> np.ndarray:
    """chi[x] for x in Z_q: 0 at 0, +1 on nonzero squares, -1 otherwise."""
    chi = -np.ones(q, dtype=np.int64)
    chi[0] = 0
    chi[sorted({(x * x) % q for x in range(1, q)})] = 1
    return chi


def paley_type1_design(q: int) -> IncidenceStructure:
    """Symmetric 2-(q,(q-1)/2,(q-3)/4) design of translates of the squares."""
    if not sympy.isprime(q) or q % 4 != 3:
        raise ParameterError(f"q={q} must be a prime congruent to 3 mod 4")
    chi = quadratic_character(q)
    x = np.arange(q)
    # block a = a + Q, so point x is on block a iff x - a is a nonzero square
    m = (chi[(x[None, :] - x[:, None]) % q] == 1).astype(np.uint8)
    return IncidenceStructure(m)


def jacobsthal(q: int) -> np.ndarray:
    x = np.arange(q)
    return quadratic_character(q)[(x[None, :] - x[:, None]) % q]


def paley_conference(q: int) -> np.ndarray:
    """Bordered Jacobsthal matrix of order q+1 (a conference matrix)."""
    c = np.zeros((q + 1, q + 1), dtype=np.int64)
    eps = 1 if q % 4 == 1 else -1
    c[0, 1:] = 1
    c[1:, 0] = eps
    c[1:, 1:] = jacobsthal(q)
    return c


def is_hadamard(h) -> bool:
    h = np.asarray(h, dtype=np.int64)
    n = h.shape[0]
    return (
        h.shape == (n, n)
        and bool(np.all(np.abs(h) == 1))
        and bool(np.array_equal(h @ h.T, n * np.eye(n, dtype=np.int64)))
    )


def paley_type1_hadamard(q: int) -> np.ndarray:
    """Skew Hadamard matrix ``I + C`` of order q+1, q = 3 mod 4."""
    if not sympy.isprime(q) or q % 4 != 3:
        raise ParameterError(f"q={q} must be a prime congruent to 3 mod 4")
    h = np.eye(q + 1, dtype=np.int64) + paley_conference(q)
    assert is_hadamard(h)
    return h


def paley_type2_hadamard(q: int) -> np.ndarray:
    """Hadamard matrix of order 2(q+1) built from the conference matrix of GF(q).

    For q = 1 mod 4 this is the classical symmetric block form
    ``[[C+I, C-I], [C-I, -C-I]]``.  For q = 3 mod 4 the conference matrix is
    skew and the companion block form ``[[C+I, C+I], [C-I, -C+I]]`` is used.
    Either way the result is checked to satisfy ``H H^T = 2(q+1) I``.
    """
    if not sympy.isprime(q):
        raise ParameterError(f"q={q} must be prime")
    c = paley_conference(q)
    i = np.eye(q + 1, dtype=np.int64)
    if q % 4 == 1:
        h = np.block([[c + i, c - i], [c - i, -c - i]])
    else:
        h = np.block([[c + i, c + i], [c - i, -c + i]])
    if not is_hadamard(h):
        raise ParameterError(f"no Paley type-II Hadamard matrix from q={q}")
    return h


def normalize_hadamard(h) -> np.ndarray:
    h = np.array(h, dtype=np.int64)
    h = h * h[:, :1]
    h = h * h[:1, :]
    return h


def hadamard_to_design(h) -> IncidenceStructure:
    """Symmetric 2-(4n-1, 2n-1, n-1) design from a Hadamard matrix of order 4n."""
    h = np.asarray(h, dtype=np.int64)
    if h.ndim != 2 or h.shape[0] % 4 or not is_hadamard(h):
        raise ParameterError("input is not a Hadamard matrix of order divisible by 4")
    core = normalize_hadamard(h)[1:, 1:]
    return IncidenceStructure((core == 1).astype(np.uint8))


# ---------------------------------------------------------------------------
# permutations and cyclic actions
# ---------------------------------------------------------------------------


def perm_order(perm) -> int:
    order = 1
    for orb in orbits(perm):
        order = order * len(orb) // gcd(order, len(orb))
    return order


def orbits(perm) -> list[list[int]]:
    """Cycles of ``perm`` (``i -> perm[i]``), each listed as p, g(p), g^2(p), ..."""
    perm = list(perm)
    if sorted(perm) != list(range(len(perm))):
        raise ParameterError("not a permutation")
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        orb = []
        x = start
        while not seen[x]:
            seen[x] = True
            orb.append(x)
            x = perm[x]
        out.append(orb)
    return out


def shift_permutation(sizes) -> np.ndarray:
    """Cyclic shift inside consecutive labelled orbits of the given sizes."""
    perm = []
    base = 0
    for s in sizes:
        perm.extend(base + (t + 1) % s for t in range(s))
        base += s
    return np.array(perm, dtype=np.int64)


@dataclass(frozen=True)
class CyclicAction:
    order: int
    point_perm: tuple[int, ...]
    block_perm: tuple[int, ...]

    def __post_init__(self):
        for perm in (self.point_perm, self.block_perm):
            if perm_order(perm) != self.order:
                raise ParameterError(f"permutation order is {perm_order(perm)}, not {self.order}")

    @classmethod
    def from_orbit_sizes(cls, n: int, block_sizes, point_sizes) -> "CyclicAction":
        """The canonical action: orbits labelled consecutively, generator = shift."""
        for s in (*block_sizes, *point_sizes):
            if n % s:
                raise ParameterError(f"orbit size {s} does not divide {n}")
        return cls(
            n,
            tuple(shift_permutation(point_sizes).tolist()),
            tuple(shift_permutation(block_sizes).tolist()),
        )

    def fixes(self, d: IncidenceStructure) -> bool:
        return d.permuted(self.point_perm, self.block_perm) == d


C6_SIZES = (1, 2, 2, 3, 3, 6, 6, 6, 6, 6, 6)
