"""
Orbit matrices of symmetric designs under a cyclic group.

An orbit matrix ``s`` for block orbit sizes ``Omega`` and point orbit sizes
``omega`` stores in ``s[i][j]`` the number of points of point orbit ``j`` on
any block of block orbit ``i``.  Validity conditions:

* C1  ``0 <= s[i][j] <= omega[j]``
* C2  every row sums to ``k``
* C3  ``sum_i Omega[i] s[i][j] = k omega[j]``
* C4  ``sum_j Omega[i'] / omega[j] s[i][j] s[i'][j] = lam Omega[i'] + [i = i'](k - lam)``
* C5  ``s[i][j]`` is a multiple of the length of the orbits of the block
  stabiliser on point orbit ``j`` (see :func:`cell_length`)

C4 is evaluated after multiplying through by ``lcm(omega)``.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import reduce
from math import factorial, gcd, prod

import numpy as np

from .designs import C6_SIZES, PARAMS_47, DesignParams, ParameterError

log = logging.getLogger(__name__)


def _lcm(values) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), values, 1)


def cell_length(n: int, block_size: int, point_size: int) -> int:
    """Length of the orbits of a block stabiliser on one point orbit.

    The stabiliser of a block in an orbit of size ``block_size`` has order
    ``n / block_size``; on a point orbit of size ``point_size`` its orbits have
    length ``(n/block_size) / gcd(n/block_size, n/point_size)``.
    """
    if n % block_size or n % point_size:
        raise ParameterError(f"orbit sizes {block_size}, {point_size} must divide {n}")
    a, b = n // block_size, n // point_size
    return a // gcd(a, b)


def admissible_values(n: int, block_size: int, point_size: int) -> list[int]:
    ell = cell_length(n, block_size, point_size)
    return list(range(0, point_size + 1, ell))


@dataclass(frozen=True)
class OrbitMatrix:
    group_order: int
    params: DesignParams
    block_sizes: tuple[int, ...]
    point_sizes: tuple[int, ...]
    s: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "block_sizes", tuple(int(x) for x in self.block_sizes))
        object.__setattr__(self, "point_sizes", tuple(int(x) for x in self.point_sizes))
        object.__setattr__(self, "s", tuple(tuple(int(x) for x in row) for row in self.s))
        t_rows, t_cols = len(self.block_sizes), len(self.point_sizes)
        if len(self.s) != t_rows or any(len(r) != t_cols for r in self.s):
            raise ParameterError(f"orbit matrix shape does not match {t_rows}x{t_cols} orbit sizes")

    @property
    def array(self) -> np.ndarray:
        return np.array(self.s, dtype=np.int64)

    def with_entry(self, i: int, j: int, value: int) -> "OrbitMatrix":
        rows = [list(r) for r in self.s]
        rows[i][j] = value
        return OrbitMatrix(self.group_order, self.params, self.block_sizes, self.point_sizes, rows)

    def cell_lengths(self) -> np.ndarray:
        n = self.group_order
        return np.array(
            [[cell_length(n, bs, ps) for ps in self.point_sizes] for bs in self.block_sizes],
            dtype=np.int64,
        )

    def canonical(self) -> "OrbitMatrix":
        return canonical_form(self)


def validate_orbit_matrix(om: OrbitMatrix) -> tuple[bool, str | None]:
    """Check C1-C5; returns ``(ok, description of the first violation)``."""
    v, k, lam = om.params.v, om.params.k, om.params.lam
    n = om.group_order
    big, small = om.block_sizes, om.point_sizes
    if sum(big) != v or sum(small) != v:
        return False, f"orbit sizes sum to {sum(big)}/{sum(small)}, not v={v}"
    for x in (*big, *small):
        if n % x:
            return False, f"orbit size {x} does not divide the group order {n}"
    s = om.s
    t_rows, t_cols = len(big), len(small)
    for i in range(t_rows):
        for j in range(t_cols):
            if not 0 <= s[i][j] <= small[j]:
                return False, f"C1 violated at ({i},{j}): {s[i][j]} not in [0,{small[j]}]"
    for i in range(t_rows):
        if sum(s[i]) != k:
            return False, f"C2 violated at row {i}: sum {sum(s[i])} != {k}"
    for j in range(t_cols):
        col = sum(big[i] * s[i][j] for i in range(t_rows))
        if col != k * small[j]:
            return False, f"C3 violated at column {j}: {col} != {k * small[j]}"
    ell = _lcm(small)
    for i in range(t_rows):
        for i2 in range(t_rows):
            lhs = sum(big[i2] * (ell // small[j]) * s[i][j] * s[i2][j] for j in range(t_cols))
            rhs = ell * (lam * big[i2] + (k - lam if i == i2 else 0))
            if lhs != rhs:
                return False, (
                    f"C4 violated at ({i},{i2}): {lhs}/{ell} != {rhs}/{ell}"
                )
    for i in range(t_rows):
        for j in range(t_cols):
            c = cell_length(n, big[i], small[j])
            if s[i][j] % c:
                return False, f"C5 violated at ({i},{j}): {s[i][j]} is not a multiple of {c}"
    return True, None


def c4_value(om: OrbitMatrix, i: int, i2: int):
    """Left-hand side of C4 for the pair ``(i, i2)`` as an exact fraction."""
    from fractions import Fraction

    return sum(
        Fraction(om.block_sizes[i2], om.point_sizes[j]) * om.s[i][j] * om.s[i2][j]
        for j in range(len(om.point_sizes))
    )


# ---------------------------------------------------------------------------
# equivalence: row permutations within equal block sizes, column permutations
# within equal point sizes
# ---------------------------------------------------------------------------


# above this many tie orderings the graph canonical form replaces lex-min
LEX_CANON_LIMIT = 5040


def _groups(sizes) -> list[list[int]]:
    out: dict[int, list[int]] = {}
    for idx, x in enumerate(sizes):
        out.setdefault(x, []).append(idx)
    return [out[x] for x in sorted(out)]


def _sort_rows(a: np.ndarray, row_groups) -> tuple:
    rows = []
    for grp in row_groups:
        rows.extend(sorted(tuple(a[i]) for i in grp))
    return tuple(rows)


def canonical_form(om: OrbitMatrix) -> OrbitMatrix:
    """Lexicographically smallest equivalent matrix with orbit sizes sorted.

    Columns inside each equal-size group are first ordered by a permutation
    invariant (their value multisets per row group); only orderings of tied
    columns are enumerated, so the result is a class function.
    """
    border = np.argsort(om.block_sizes, kind="stable")
    porder = np.argsort(om.point_sizes, kind="stable")
    big = tuple(om.block_sizes[i] for i in border)
    small = tuple(om.point_sizes[j] for j in porder)
    a = om.array[np.ix_(border, porder)]
    row_groups = _groups(big)
    col_groups = _groups(small)

    def col_key(j):
        return tuple(tuple(sorted(a[i, j] for i in grp)) for grp in row_groups)

    tie_groups = []
    for grp in col_groups:
        keyed = sorted(grp, key=col_key)
        tie_groups.append([list(g) for _, g in itertools.groupby(keyed, key=col_key)])
    if prod(factorial(len(t)) for ties in tie_groups for t in ties) > LEX_CANON_LIMIT:
        return _graph_canonical_form(om.group_order, om.params, big, small, a)
    per_group_choices = [
        [list(itertools.chain.from_iterable(p)) for p in itertools.product(*(itertools.permutations(t) for t in ties))]
        for ties in tie_groups
    ]
    best = None
    for choice in itertools.product(*per_group_choices):
        perm = list(itertools.chain.from_iterable(choice))
        key = _sort_rows(a[:, perm], row_groups)
        if best is None or key < best:
            best = key
    return OrbitMatrix(om.group_order, om.params, big, small, best)


def _graph_canonical_form(n, params, big, small, a: np.ndarray) -> OrbitMatrix:
    """Canonical form through canonical labelling of the bipartite graph
    rows / columns, edge colour = entry + 1, vertex colour = (side, size)."""
    from .refine import canonical_labeling, ColoredGraph

    t_rows, t_cols = a.shape
    adj = np.zeros((t_rows + t_cols, t_rows + t_cols), dtype=np.int64)
    adj[:t_rows, t_rows:] = a + 1
    adj[t_rows:, :t_rows] = a.T + 1
    colors = np.array([(0, x) for x in big] + [(1, x) for x in small], dtype=np.int64)
    lab = canonical_labeling(ColoredGraph(adj, colors))
    rows = np.argsort(lab.colors[:t_rows])
    cols = np.argsort(lab.colors[t_rows:])
    return OrbitMatrix(n, params, big, small, a[np.ix_(rows, cols)])


def equivalent(a: OrbitMatrix, b: OrbitMatrix) -> bool:
    return canonical_form(a) == canonical_form(b)


# ---------------------------------------------------------------------------
# generation
# ---------------------------------------------------------------------------


def _row_vectors(allowed, k: int, weights, self_rhs: int) -> np.ndarray:
    """All rows with entries from ``allowed``, sum ``k`` and
    ``sum_j weights[j] * x_j**2 == self_rhs``."""
    t_cols = len(allowed)
    max_rest = [0] * (t_cols + 1)
    for j in range(t_cols - 1, -1, -1):
        max_rest[j] = max_rest[j + 1] + allowed[j][-1]
    out: list[tuple[int, ...]] = []
    entry = [0] * t_cols

    def rec(j, rsum, ssum):
        if j == t_cols:
            if rsum == k and ssum == self_rhs:
                out.append(tuple(entry))
            return
        for x in allowed[j]:
            if rsum + x > k:
                break
            ss = ssum + weights[j] * x * x
            if ss > self_rhs:
                break
            if rsum + x + max_rest[j + 1] < k:
                continue
            entry[j] = x
            rec(j + 1, rsum + x, ss)
        entry[j] = 0

    rec(0, 0, 0)
    return np.array(out, dtype=np.int64).reshape(-1, t_cols)


def generate_orbit_matrices(
    params: DesignParams, n: int, block_sizes, point_sizes
) -> list[OrbitMatrix]:
    """All orbit matrices satisfying C1-C5, one per equivalence class.

    Rows are filled in order of increasing block orbit size.  For every
    block orbit size the rows satisfying C1, C2, C5 and the diagonal C4
    equation are listed once; the search then filters them against the rows
    already placed (off-diagonal C4, column capacity for C3).  Rows with equal
    block size are kept in nondecreasing lexicographic order and, inside each
    group of equal point orbit sizes, the entries of the first row are
    nondecreasing.  Survivors are canonized, deduplicated and sorted.
    """
    big = tuple(sorted(int(x) for x in block_sizes))
    small = tuple(sorted(int(x) for x in point_sizes))
    v, k, lam = params.v, params.k, params.lam
    if sum(big) != v or sum(small) != v:
        raise ParameterError("orbit sizes must sum to v")
    for x in (*big, *small):
        if n % x:
            raise ParameterError(f"orbit size {x} does not divide {n}")
    t_rows, t_cols = len(big), len(small)
    ell = _lcm(small)
    wgt = np.array([ell // w for w in small], dtype=np.int64)

    cands: dict[int, np.ndarray] = {}
    for b in sorted(set(big)):
        allowed = [admissible_values(n, b, small[j]) for j in range(t_cols)]
        rows_b = _row_vectors(allowed, k, [b * int(w) for w in wgt], ell * (lam * b + k - lam))
        cands[b] = rows_b

    # first-row symmetry cut inside equal point-orbit-size groups
    first = cands[big[0]]
    keep = np.ones(len(first), dtype=bool)
    for grp in _groups(small):
        for a_, b_ in zip(grp, grp[1:]):
            keep &= first[:, a_] <= first[:, b_]
    first = first[keep]

    col_target = np.array([k * w for w in small], dtype=np.int64)
    col_room = np.zeros((t_rows + 1, t_cols), dtype=np.int64)
    for i in range(t_rows - 1, -1, -1):
        col_room[i] = col_room[i + 1] + big[i] * np.array(
            [admissible_values(n, big[i], w)[-1] for w in small]
        )

    raw: set[tuple] = set()
    rows: list[np.ndarray] = []

    def search(i, pool_by_size, col_sum):
        if i == t_rows:
            if np.array_equal(col_sum, col_target):
                raw.add(tuple(tuple(int(x) for x in r) for r in rows))
            return
        pool = first if i == 0 else pool_by_size[big[i]]
        if len(pool) == 0:
            return
        new_sum = col_sum[None, :] + big[i] * pool
        ok = np.all(new_sum <= col_target, axis=1) & np.all(
            new_sum + col_room[i + 1] >= col_target, axis=1
        )
        if i > 0 and big[i] == big[i - 1]:
            prev = rows[-1]
            # lexicographic pool[r] >= prev
            diff = pool != prev
            firstdiff = np.where(diff.any(axis=1), diff.argmax(axis=1), t_cols)
            idx = np.minimum(firstdiff, t_cols - 1)
            ge = (firstdiff == t_cols) | (pool[np.arange(len(pool)), idx] > prev[idx])
            ok &= ge
        for r_idx in np.flatnonzero(ok):
            row = pool[r_idx]
            # remaining candidates must meet this row in lam (off-diagonal C4)
            target = row * wgt
            nxt = {
                b: p[(p @ target) == ell * lam] for b, p in pool_by_size.items()
            }
            rows.append(row)
            search(i + 1, nxt, col_sum + big[i] * row)
            rows.pop()

    pools = {b: cands[b] for b in cands}
    search(0, pools, np.zeros(t_cols, dtype=np.int64))
    log.info("orbit matrix search: %d raw solutions", len(raw))
    canon = {canonical_form(OrbitMatrix(n, params, big, small, r)) for r in raw}
    out = sorted(canon, key=lambda om: om.s)
    for om in out:
        ok, why = validate_orbit_matrix(om)
        if not ok:
            raise AssertionError(f"generator produced an invalid orbit matrix: {why}")
    return out


# ---------------------------------------------------------------------------
# appendix data
# ---------------------------------------------------------------------------

_APPENDIX = {
    1: """
0 2 0 3 0 6 6 6 0 0 0
1 2 2 0 0 6 3 0 3 3 3
0 2 0 0 3 3 3 3 6 3 0
1 2 2 3 3 2 2 2 2 2 2
0 2 0 3 0 2 2 2 4 4 4
1 1 1 1 1 2 3 4 2 5 2
1 1 1 1 1 2 3 4 4 1 4
1 0 0 2 2 4 3 2 3 3 3
0 0 2 2 1 3 3 3 4 3 2
0 1 1 1 2 2 5 2 2 3 4
0 1 1 1 2 4 1 4 2 3 4
""",
    2: """
0 2 0 3 0 6 6 6 0 0 0
1 2 2 0 0 6 3 0 3 3 3
0 2 0 0 3 3 3 3 6 3 0
1 2 2 3 3 2 2 2 2 2 2
0 2 0 3 0 2 2 2 4 4 4
1 1 1 1 1 3 1 5 3 3 3
1 1 1 1 1 1 5 3 3 3 3
1 0 0 2 2 4 3 2 3 3 3
0 0 2 2 1 3 3 3 4 3 2
0 1 1 1 2 3 3 3 3 1 5
0 1 1 1 2 3 3 3 1 5 3
""",
    3: """
0 2 0 3 0 6 6 6 0 0 0
1 2 2 0 0 3 3 3 6 3 0
0 2 0 0 3 6 3 0 3 3 3
1 2 2 3 3 2 2 2 2 2 2
0 2 0 3 0 2 2 2 4 4 4
1 1 1 1 1 2 5 2 2 3 4
1 1 1 1 1 4 1 4 2 3 4
1 0 0 2 2 3 3 3 4 3 2
0 0 2 2 1 4 3 2 3 3 3
0 1 1 1 2 2 3 4 2 5 2
0 1 1 1 2 2 3 4 4 1 4
""",
    4: """
0 2 0 3 0 6 6 6 0 0 0
1 2 2 0 0 3 3 3 6 3 0
0 2 0 0 3 6 3 0 3 3 3
1 2 2 3 3 2 2 2 2 2 2
0 2 0 3 0 2 2 2 4 4 4
1 1 1 1 1 3 3 3 3 1 5
1 1 1 1 1 3 3 3 1 5 3
1 0 0 2 2 3 3 3 4 3 2
0 0 2 2 1 4 3 2 3 3 3
0 1 1 1 2 3 1 5 3 3 3
0 1 1 1 2 1 5 3 3 3 3
""",
}


def load_appendix(idx: int) -> OrbitMatrix:
    """One of the four published orbit matrices OM1-OM4 (C6 on 2-(47,23,11))."""
    if idx not in _APPENDIX:
        raise ParameterError(f"appendix orbit matrix id must be 1..4, got {idx}")
    rows = [tuple(int(x) for x in line.split()) for line in _APPENDIX[idx].strip().splitlines()]
    return OrbitMatrix(6, PARAMS_47, C6_SIZES, C6_SIZES, rows)
