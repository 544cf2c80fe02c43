"""Ternary linear codes and the design-to-code construction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .designs import PARAMS_47, DesignParams, IncidenceStructure, ParameterError, validate_symmetric_design
from .gf3 import TritMatrix, in_row_space, kernel_basis, mat_mul, rref


class InvariantViolation(RuntimeError):
    """An internal consistency check failed (a bug, not a user error)."""


@dataclass(frozen=True, eq=False)
class TernaryCode:
    """Linear code over GF(3) given by a full-rank generator matrix.

    The generator is kept in reduced echelon form so that two equal codes
    serialize identically.
    """

    generator: TritMatrix
    self_dual: bool = field(default=False, compare=False)

    @classmethod
    def from_generator(cls, g, *, check_self_dual: bool = True) -> "TernaryCode":
        if not isinstance(g, TritMatrix):
            g = TritMatrix.from_array(g)
        r, k, _ = rref(g)
        code = cls(r.take_rows(range(k)))
        if check_self_dual and is_self_dual(code):
            object.__setattr__(code, "self_dual", True)
        return code

    @property
    def n(self) -> int:
        return self.generator.cols

    @property
    def k(self) -> int:
        return self.generator.rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, TernaryCode):
            return NotImplemented
        return self.generator == other.generator

    def __hash__(self) -> int:
        return hash(self.generator)

    def __repr__(self) -> str:
        return f"TernaryCode[{self.n},{self.k}]"

    def contains(self, words) -> np.ndarray:
        if not isinstance(words, TritMatrix):
            words = TritMatrix.from_array(words)
        if self.self_dual:
            return mat_mul(words, self.generator.transpose()).to_array().any(axis=1) == 0
        return in_row_space(self.generator, words)

    def parity_check(self) -> TritMatrix:
        return kernel_basis(self.generator)

    def permuted(self, perm, signs=None) -> "TernaryCode":
        """Image under the monomial map sending coordinate i to ``perm[i]``
        after multiplying it by ``signs[i]`` (1 or 2)."""
        g = self.generator.to_array().astype(np.int64)
        if signs is not None:
            g = g * np.asarray(signs, dtype=np.int64)[None, :]
        out = np.empty_like(g)
        out[:, np.asarray(perm)] = g
        return TernaryCode.from_generator(out % 3)


def is_self_dual(code: TernaryCode) -> bool:
    if 2 * code.k != code.n:
        return False
    g = code.generator
    return mat_mul(g, g.transpose()).is_zero()


def augmented_design_matrix(d: IncidenceStructure) -> TritMatrix:
    """Incidence matrix with the all-one column appended last."""
    m = np.hstack([d.matrix, np.ones((d.b, 1), dtype=np.uint8)])
    return TritMatrix.from_array(m)


def code_from_design(d: IncidenceStructure, params: DesignParams = PARAMS_47) -> TernaryCode:
    """Row space over GF(3) of ``[M | 1]`` for a symmetric design ``M``.

    For 2-(47,23,11) designs this is a self-dual [48,24] code.
    """
    if not validate_symmetric_design(d, params):
        raise ParameterError(f"input is not a symmetric 2-{(params.v, params.k, params.lam)} design")
    r, k, _ = rref(augmented_design_matrix(d))
    if k != (params.v + 1) // 2:
        raise InvariantViolation(f"rank over GF(3) is {k}, expected {(params.v + 1) // 2}")
    code = TernaryCode(r.take_rows(range(k)))
    if not is_self_dual(code):
        raise InvariantViolation("design code is not self-dual")
    object.__setattr__(code, "self_dual", True)
    return code


TETRACODE = [[1, 1, 1, 0], [0, 1, 2, 1]]


def tetracode() -> TernaryCode:
    return TernaryCode.from_generator(TETRACODE)


def golay12() -> TernaryCode:
    """Extended ternary Golay code: ``[I | P]`` with P the bordered Paley matrix of GF(5)."""
    from .designs import paley_conference

    p = paley_conference(5) % 3
    return TernaryCode.from_generator(np.hstack([np.eye(6, dtype=np.int64), p]))


def max_self_orthogonal_dim(n: int) -> int:
    """Largest dimension of a ternary self-orthogonal code of length ``n``."""
    return n // 2 if n % 4 == 0 else (n - 1) // 2 if n % 2 else n // 2 - 1


def random_self_orthogonal_code(n: int, k: int, rng: np.random.Generator) -> TernaryCode:
    """A random self-orthogonal ``[n, k]`` code (test material).

    Grows a basis one word at a time, drawing from the dual of the current
    code and keeping words of weight divisible by 3 outside the span.
    """
    if not 1 <= k <= max_self_orthogonal_dim(n):
        raise ParameterError(f"no self-orthogonal [{n},{k}] code exists")
    rows: list[np.ndarray] = []
    while len(rows) < k:
        if rows:
            dual = kernel_basis(TritMatrix.from_array(np.array(rows))).to_array().astype(np.int64)
            x = (rng.integers(0, 3, size=len(dual)) @ dual) % 3
        else:
            x = rng.integers(0, 3, size=n)
        if not x.any() or np.count_nonzero(x) % 3:
            continue
        if rows and in_row_space(TritMatrix.from_array(np.array(rows)), TritMatrix.from_array(x[None, :]))[0]:
            continue
        rows.append(x.astype(np.uint8))
    return TernaryCode.from_generator(np.array(rows))
