"""
Expansion ("indexing") of an orbit matrix into cyclic-invariant designs.

Points and blocks are labelled orbit by orbit in the order of the orbit
matrix, and the group generator shifts each orbit cyclically.  A design is
fixed by the representative block of every block orbit ``i``: on point orbit
``j`` (identified with ``Z_omega``) it meets a set ``X[i][j]`` that is a union
of ``s[i][j] / ell`` cells, the cells being the cosets of ``gcd(Omega_i,
omega_j) Z`` (the orbits of the block stabiliser).  Block ``t`` of orbit ``i``
is ``X[i] + t``.

Rows are placed in orbit-matrix order.  For the row being placed, every
intersection number with the blocks already present (and with its own
translates) is a sum of per-point-orbit contributions, so the admissible rows
are found by a meet-in-the-middle join of the left and right column halves
on the vector of these sums.

Orientation: by default the rows of the orbit matrix index *point* orbits
and ``s[i][j]`` counts the blocks of orbit ``j`` through a point of orbit
``i``; the matrix built row by row is then the transpose of the incidence
matrix (blocks x points).  With ``rows_are_points=False`` rows index block
orbits instead.  The two readings give dual designs.  Only the first is
compatible with the published minimum weights: with rows read as block
orbits, every design of the four published matrices has a weight-6 word,
constant on orbits, in its code.

Visiting order: candidate rows are tried in a fixed scrambled order (a hash
of the row) rather than lexicographically.  The lexicographic head of the
stream sits in a corner of the search space whose designs all share a
weight-9 codeword; the scrambled order spreads the first designs out.  Both
orders are exhaustive and deterministic.

Symmetry cut: the group generated by rotating a single point orbit, by
changing the representative of a block orbit and by the multiplier ``x ->
-x`` maps admissible choice vectors to admissible ones.  Only choice vectors
that are lexicographically minimal in their orbit under this group are
expanded; the test is prefix-closed and is applied after each row.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from math import comb, gcd
from typing import Iterable, Iterator

import numpy as np

from .designs import CyclicAction, IncidenceStructure, ParameterError, validate_symmetric_design
from .orbit_matrix import OrbitMatrix, cell_length, validate_orbit_matrix
from .refine import mix64

log = logging.getLogger(__name__)


def _rot(mask: int, r: int, size: int) -> int:
    r %= size
    full = (1 << size) - 1
    return ((mask << r) | (mask >> (size - r))) & full if r else mask


def _neg(mask: int, size: int) -> int:
    out = 0
    for x in range(size):
        if mask >> x & 1:
            out |= 1 << ((-x) % size)
    return out


def _row_keys(rows: np.ndarray) -> np.ndarray:
    """Fixed pseudo-random sort keys for candidate rows (a pure function of the row)."""
    mult = mix64(np.arange(rows.shape[1], dtype=np.uint64))
    with np.errstate(over="ignore"):
        acc = (rows.astype(np.uint64) * mult).sum(axis=1, dtype=np.uint64)
    return mix64(acc)


def _popcount(x: int) -> int:
    return bin(x).count("1")


class _Cell:
    """Candidate patterns for one orbit-matrix entry."""

    def __init__(self, n: int, block_size: int, point_size: int, value: int):
        self.size = point_size
        self.ncells = gcd(block_size, point_size)
        self.ell = point_size // self.ncells
        assert self.ell == cell_length(n, block_size, point_size)
        cells = [sum(1 << x for x in range(c, point_size, self.ncells)) for c in range(self.ncells)]
        self.choices = list(itertools.combinations(range(self.ncells), value // self.ell))
        self.masks = [sum(cells[c] for c in ch) for ch in self.choices]
        self.index = {m: a for a, m in enumerate(self.masks)}
        self.negated = [self.index[_neg(m, point_size)] for m in self.masks]

    def rotated(self, idx: int, r: int) -> int:
        return self.index[_rot(self.masks[idx], r, self.size)]


@dataclass(frozen=True)
class ExpansionResult:
    design: IncidenceStructure
    action: CyclicAction
    source: str
    choice: tuple[int, ...]  # chosen cell indices, row-major over the orbit matrix
    path: tuple[int, ...] = ()  # candidate index per row in visiting order (stream position)

    def provenance(self) -> str:
        return f"# source {self.source} choice " + " ".join(map(str, self.choice))


class Expander:
    """Deterministic depth-first expansion of one orbit matrix."""

    def __init__(
        self,
        om: OrbitMatrix,
        *,
        symmetry_cut: bool = True,
        source: str = "OM",
        rows_are_points: bool = True,
        visit_order: str = "mixed",
    ):
        ok, why = validate_orbit_matrix(om)
        if not ok:
            raise ParameterError(f"invalid orbit matrix: {why}")
        self.om = om
        self.source = source
        self.symmetry_cut = symmetry_cut
        self.rows_are_points = rows_are_points
        if visit_order not in ("mixed", "lex"):
            raise ParameterError(f"visit order must be 'mixed' or 'lex', got {visit_order!r}")
        self.visit_order = visit_order
        self.lam = om.params.lam
        self.big = om.block_sizes
        self.small = om.point_sizes
        self.t_rows = len(self.big)
        self.t_cols = len(self.small)
        n = om.group_order
        self.cells = [
            [_Cell(n, self.big[i], self.small[j], om.s[i][j]) for j in range(self.t_cols)]
            for i in range(self.t_rows)
        ]
        self.point_offset = np.cumsum((0,) + self.small)[:-1]
        self.block_offset = np.cumsum((0,) + self.big)[:-1]
        if rows_are_points:
            self.action = CyclicAction.from_orbit_sizes(n, self.small, self.big)
        else:
            self.action = CyclicAction.from_orbit_sizes(n, self.big, self.small)
        self.nodes = 0

    # -- row candidates ---------------------------------------------------

    def _constraints(self, i: int, placed: list[tuple[int, ...]]):
        """Per-column contribution tables for row ``i`` given earlier rows."""
        tables = []
        for j in range(self.t_cols):
            cell = self.cells[i][j]
            size = self.small[j]
            cols = []
            for i2, row in enumerate(placed):
                other = self.cells[i2][j].masks[row[j]]
                for t in range(self.big[i2]):
                    rot = _rot(other, t, size)
                    cols.append([_popcount(m & rot) for m in cell.masks])
            for t in range(1, self.big[i]):
                cols.append([_popcount(m & _rot(m, t, size)) for m in cell.masks])
            if cols:
                tables.append(np.array(cols, dtype=np.int16).T)
            else:
                tables.append(np.zeros((len(cell.masks), 0), dtype=np.int16))
        return tables

    def _half(self, tables, cols, rest_max, rest_min):
        """All partial sums over ``cols`` that can still be completed."""
        lam = self.lam
        dim = tables[0].shape[1]
        vecs = np.zeros((1, dim), dtype=np.int16)
        idx = np.zeros((1, 0), dtype=np.int32)
        remaining_cols = list(cols)
        for j in cols:
            remaining_cols.remove(j)
            tab = tables[j]
            vecs = (vecs[:, None, :] + tab[None, :, :]).reshape(-1, dim)
            idx = np.concatenate(
                [np.repeat(idx, len(tab), axis=0), np.tile(np.arange(len(tab), dtype=np.int32), len(idx))[:, None]],
                axis=1,
            )
            hi = rest_max + sum(tables[c].max(axis=0) for c in remaining_cols) if remaining_cols else rest_max
            lo = rest_min + sum(tables[c].min(axis=0) for c in remaining_cols) if remaining_cols else rest_min
            ok = np.all(vecs + lo <= lam, axis=1) & np.all(vecs + hi >= lam, axis=1)
            vecs, idx = vecs[ok], idx[ok]
            if len(vecs) == 0:
                break
        return vecs, idx

    def row_candidates(self, i: int, placed: list[tuple[int, ...]]) -> np.ndarray:
        """All pattern-index rows for orbit ``i`` compatible with ``placed``, in
        visiting order (lexicographic, or the fixed mixed order)."""
        tables = self._constraints(i, placed)
        dim = tables[0].shape[1]
        counts = [len(self.cells[i][j].masks) for j in range(self.t_cols)]
        if dim == 0:
            rows = np.array(list(itertools.product(*(range(c) for c in counts))), dtype=np.int32)
            return self._visit(rows.reshape(-1, self.t_cols))
        # balance the two halves by raw product size
        logs = np.log(np.maximum(counts, 1))
        total = logs.sum()
        split = int(np.argmin([abs(logs[:c].sum() - total / 2) for c in range(self.t_cols + 1)]))
        left, right = list(range(split)), list(range(split, self.t_cols))
        zeros = np.zeros(dim, dtype=np.int16)

        def bounds(cols):
            if not cols:
                return zeros, zeros
            return sum(tables[c].max(axis=0) for c in cols), sum(tables[c].min(axis=0) for c in cols)

        rmax, rmin = bounds(right)
        lmax, lmin = bounds(left)
        lv, li = self._half(tables, left, rmax, rmin)
        rv, ri = self._half(tables, right, lmax, lmin)
        if len(lv) == 0 or len(rv) == 0:
            return np.zeros((0, self.t_cols), dtype=np.int32)
        # hash-join on the sum vectors; fixed 64-bit weights, matches verified exactly below
        weights = mix64(np.arange(dim, dtype=np.uint64)) | np.uint64(1)
        comp = (self.lam - rv).astype(np.int64)
        with np.errstate(over="ignore"):
            key_r = (comp.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
            key_l = (lv.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
        order_r = np.argsort(key_r, kind="stable")
        sorted_r = key_r[order_r]
        lo = np.searchsorted(sorted_r, key_l, side="left")
        hi = np.searchsorted(sorted_r, key_l, side="right")
        cnt = hi - lo
        if not cnt.any():
            return np.zeros((0, self.t_cols), dtype=np.int32)
        out_l = np.repeat(np.arange(len(lv)), cnt)
        starts = np.repeat(lo - np.concatenate([[0], np.cumsum(cnt)[:-1]]), cnt)
        out_r = order_r[starts + np.arange(len(out_l))]
        exact = np.all(lv[out_l] == comp[out_r], axis=1)
        out_l, out_r = out_l[exact], out_r[exact]
        if len(out_l) == 0:
            return np.zeros((0, self.t_cols), dtype=np.int32)
        rows = np.concatenate([li[out_l], ri[out_r]], axis=1)
        return self._visit(rows[np.lexsort(rows.T[::-1])])

    def _visit(self, rows: np.ndarray) -> np.ndarray:
        if self.visit_order == "mixed" and len(rows) > 1:
            rows = rows[np.argsort(_row_keys(rows), kind="stable")]
        return rows

    # -- symmetry cut -----------------------------------------------------

    def _initial_states(self):
        full = [(1 << w) - 1 for w in self.small]
        return [(eps, (), tuple(full)) for eps in (1, -1)]

    def _check_row(self, i: int, row, states):
        """Apply the lex-min test to a completed row.

        Each state is (eps, row shifts so far, allowed column rotations as
        bitmasks over Z_omega) and stands for the group elements whose image
        of the prefix equals the prefix.  Returns the surviving states, or
        ``None`` when some element maps the prefix to something smaller.
        """
        out = []
        for eps, shifts, allowed in states:
            for t in range(self.big[i]):
                new_allowed = list(allowed)
                status = 0  # 0 equal so far, 1 bigger (dead branch)
                for j in range(self.t_cols):
                    cell = self.cells[i][j]
                    size = self.small[j]
                    orig = row[j]
                    base = cell.negated[orig] if eps < 0 else orig
                    best = None
                    eq_mask = 0
                    a = new_allowed[j]
                    for r in range(size):
                        if not a >> r & 1:
                            continue
                        val = cell.rotated(base, r + t)
                        if best is None or val < best:
                            best = val
                        if val == orig:
                            eq_mask |= 1 << r
                    if best < orig:
                        return None
                    if not eq_mask:
                        status = 1
                        break
                    new_allowed[j] = eq_mask
                if status == 0:
                    out.append((eps, shifts + (t,), tuple(new_allowed)))
        return out

    # -- search -----------------------------------------------------------

    def design_from_rows(self, rows) -> IncidenceStructure:
        v = sum(self.small)
        m = np.zeros((sum(self.big), v), dtype=np.uint8)
        for i, row in enumerate(rows):
            for t in range(self.big[i]):
                b = self.block_offset[i] + t
                for j in range(self.t_cols):
                    mask = _rot(self.cells[i][j].masks[row[j]], t, self.small[j])
                    for x in range(self.small[j]):
                        if mask >> x & 1:
                            m[b, self.point_offset[j] + x] = 1
        return IncidenceStructure(m.T.copy() if self.rows_are_points else m)

    def choice_vector(self, rows) -> tuple[int, ...]:
        out = []
        for i, row in enumerate(rows):
            for j in range(self.t_cols):
                out.extend(self.cells[i][j].choices[row[j]])
        return tuple(out)

    def rows_from_choice(self, choice: Iterable[int]) -> list[tuple[int, ...]]:
        it = iter(choice)
        rows = []
        for i in range(self.t_rows):
            row = []
            for j in range(self.t_cols):
                cell = self.cells[i][j]
                width = len(cell.choices[0])
                ch = tuple(next(it) for _ in range(width))
                row.append(cell.choices.index(ch))
            rows.append(tuple(row))
        return rows

    def _result(self, rows, path) -> ExpansionResult:
        return ExpansionResult(
            self.design_from_rows(rows), self.action, self.source, self.choice_vector(rows), tuple(path)
        )

    def __iter__(self) -> Iterator[ExpansionResult]:
        return self.expand()

    def expand(
        self, prefix: tuple[int, ...] | None = None, *, after: tuple[int, ...] | None = None
    ) -> Iterator[ExpansionResult]:
        """Yield designs in deterministic order.

        ``prefix`` restricts the search to the subtree whose first rows are
        the given candidate indices (the partition handle).  ``after`` resumes
        the stream just past the design with that full candidate path.
        """
        placed: list[tuple[int, ...]] = []
        yield from self._search(0, placed, [], self._initial_states(), tuple(prefix or ()), after)

    def _search(self, i, placed, path, states, prefix, after):
        self.nodes += 1
        if i == self.t_rows:
            if after is None:  # ``after`` survives only along the resumed path
                yield self._result(placed, path)
            return
        cands = self.row_candidates(i, placed)
        start = after[i] if after is not None else 0
        indices = range(start, len(cands))
        if i < len(prefix):
            indices = [prefix[i]] if start <= prefix[i] < len(cands) else []
        for c in indices:
            row = tuple(int(x) for x in cands[c])
            nxt = states
            if self.symmetry_cut:
                nxt = self._check_row(i, row, states)
                if nxt is None:
                    continue
            placed.append(row)
            path.append(c)
            yield from self._search(i + 1, placed, path, nxt, prefix, after if after is not None and c == start else None)
            path.pop()
            placed.pop()

    def top_level_branches(self, depth: int = 1) -> list[tuple[int, ...]]:
        """Candidate-index prefixes of the given depth that survive the cut;
        disjoint subtrees for parallel or resumable expansion."""
        out = []

        def rec(i, placed, states, path):
            if i == depth:
                out.append(path)
                return
            cands = self.row_candidates(i, placed)
            for c in range(len(cands)):
                row = tuple(int(x) for x in cands[c])
                nxt = states
                if self.symmetry_cut:
                    nxt = self._check_row(i, row, states)
                    if nxt is None:
                        continue
                placed.append(row)
                rec(i + 1, placed, nxt, path + (c,))
                placed.pop()

        rec(0, [], self._initial_states(), ())
        return out


def expand(
    om: OrbitMatrix,
    *,
    limit: int | None = None,
    symmetry_cut: bool = True,
    source: str = "OM",
    rows_are_points: bool = True,
    visit_order: str = "mixed",
):
    """Stream the designs of an orbit matrix (at most ``limit`` of them)."""
    gen = Expander(
        om, symmetry_cut=symmetry_cut, source=source, rows_are_points=rows_are_points, visit_order=visit_order
    ).expand()
    if limit is not None:
        gen = itertools.islice(gen, limit)
    return gen


def replay(om: OrbitMatrix, choice: Iterable[int], *, rows_are_points: bool = True) -> IncidenceStructure:
    """Rebuild a design from its provenance choice vector."""
    ex = Expander(om, symmetry_cut=False, rows_are_points=rows_are_points)
    return ex.design_from_rows(ex.rows_from_choice(choice))


def orbit_sums(design: IncidenceStructure, row_sizes, col_sizes, *, rows_are_points: bool = True) -> np.ndarray:
    """Collapse a design back to its orbit matrix (representative = first
    element of each row orbit), in the given orientation."""
    bo = np.cumsum((0,) + tuple(row_sizes))[:-1]
    po = np.cumsum((0,) + tuple(col_sizes))
    m = design.matrix.astype(np.int64)
    if rows_are_points:
        m = m.T
    return np.array(
        [[int(m[b, po[j] : po[j + 1]].sum()) for j in range(len(col_sizes))] for b in bo],
        dtype=np.int64,
    )


def isomorph_reject(results: Iterable[ExpansionResult], *, canon=None) -> list[ExpansionResult]:
    """Keep the first design of every isomorphism class (stream order)."""
    if canon is None:
        from .equivalence import canonical_design

        canon = canonical_design
    seen: set[str] = set()
    out = []
    for r in results:
        key = canon(r.design).key()
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def n_raw_choices(om: OrbitMatrix) -> int:
    """Size of the unpruned search space (product of per-row pattern counts)."""
    total = 1
    for i in range(len(om.block_sizes)):
        for j in range(len(om.point_sizes)):
            ell = cell_length(om.group_order, om.block_sizes[i], om.point_sizes[j])
            total *= comb(om.point_sizes[j] // ell, om.s[i][j] // ell)
    return total
