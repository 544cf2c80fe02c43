"""
Individualization-refinement on small edge-coloured graphs.

A graph is an ``n x n`` integer matrix of edge colours (0 = no edge) plus an
initial vertex colouring.  Colourings are arrays whose values are ordered
cell indices; refinement splits cells by the colours of the edges into every
cell and renumbers cells by the sorted split keys, so every step is
label-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _rank_rows(keys: np.ndarray) -> np.ndarray:
    """Dense ranks of the rows of ``keys`` in lexicographic order."""
    _, inverse = np.unique(keys, axis=0, return_inverse=True)
    return inverse.reshape(-1).astype(np.int64)


def mix64(x: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer: a fixed bijective scrambling of 64-bit integers."""
    z = (x.astype(np.uint64) + np.uint64(0x9E3779B97F4A7C15)) * np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


class ColoredGraph:
    """Edge-coloured graph with an initial vertex colouring.

    Refinement counts neighbours per edge colour through a hashed colour
    matrix: for vertex ``v`` and cell ``c`` the key is the wrapping sum of
    ``h(colour(v, u))`` over ``u`` in ``c``, a fixed function of the multiset
    of colours, so refinement stays label-independent (a hash collision can
    only make refinement coarser, never wrong).  Subclasses may add
    further invariant keys through :meth:`extra_keys`.
    """

    def __init__(self, matrix: np.ndarray, colors=None):
        m = np.asarray(matrix, dtype=np.int64)
        self.n = m.shape[0]
        self.matrix = m
        _, inv = np.unique(m, return_inverse=True)
        # 40-bit hashes keep row sums exact in float64 for n < 2**13
        h = (mix64(inv.reshape(m.shape)) >> np.uint64(24)).astype(np.float64)
        h[m == 0] = 0.0
        self._hashed = h
        base = np.zeros(self.n, dtype=np.int64) if colors is None else np.asarray(colors, dtype=np.int64)
        if base.ndim == 1:
            base = base[:, None]
        self.keys = np.ascontiguousarray(base)
        self.initial = _rank_rows(base)

    def _refine_edges(self, colors: np.ndarray) -> np.ndarray:
        colors = np.asarray(colors, dtype=np.int64)
        ncol = int(colors.max()) + 1
        while True:
            onehot = np.zeros((self.n, ncol), dtype=np.float64)
            onehot[np.arange(self.n), colors] = 1.0
            sums = (self._hashed @ onehot).astype(np.int64)
            new = _rank_rows(np.concatenate([colors[:, None], sums], axis=1))
            new_n = int(new.max()) + 1
            if new_n == ncol:
                return new
            colors, ncol = new, new_n

    def extra_keys(self, colors: np.ndarray) -> np.ndarray | None:
        """Additional invariant vertex keys for the current colouring."""
        return None

    def refine(self, colors: np.ndarray) -> np.ndarray:
        colors = self._refine_edges(colors)
        while True:
            extra = self.extra_keys(colors)
            if extra is None:
                return colors
            new = _rank_rows(np.concatenate([colors[:, None], extra], axis=1))
            if new.max() == colors.max():
                return colors
            colors = self._refine_edges(new)

    def individualize(self, colors: np.ndarray, v: int) -> np.ndarray:
        key = np.stack([colors, np.ones(self.n, dtype=np.int64)], axis=1)
        key[v, 1] = 0
        return self.refine(_rank_rows(key))

    def certificate(self, colors: np.ndarray) -> bytes:
        order = np.argsort(colors)
        return (
            np.ascontiguousarray(self.keys[order]).tobytes()
            + np.ascontiguousarray(self.matrix[np.ix_(order, order)]).tobytes()
        )


def _target_cell(colors: np.ndarray) -> np.ndarray | None:
    counts = np.bincount(colors)
    nontrivial = np.flatnonzero(counts > 1)
    if len(nontrivial) == 0:
        return None
    c = nontrivial[np.argmin(counts[nontrivial])]
    return np.flatnonzero(colors == c)


def _orbits_fixing(gens: list[np.ndarray], fixed: tuple[int, ...], n: int) -> np.ndarray:
    parent = np.arange(n)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        if all(g[v] == v for v in fixed):
            for x in range(n):
                a, b = find(x), find(int(g[x]))
                if a != b:
                    parent[max(a, b)] = min(a, b)
    return np.array([find(x) for x in range(n)])


@dataclass
class Labeling:
    colors: np.ndarray  # vertex -> canonical position
    certificate: bytes
    generators: list[np.ndarray] = field(default_factory=list)
    leaves: int = 0

    def group_order(self) -> int:
        if not self.generators:
            return 1
        from sympy.combinatorics import Permutation, PermutationGroup

        return int(PermutationGroup([Permutation(g.tolist()) for g in self.generators]).order())


def canonical_labeling(graph: ColoredGraph) -> Labeling:
    """Canonical labelling with automorphism pruning.

    The canonical form is the leaf with the smallest certificate.  Every pair
    of leaves with equal certificates yields an automorphism; children of a
    node that lie in one orbit of the automorphisms found so far (restricted
    to those fixing the node's individualized vertices) are explored once.
    """
    gens: list[np.ndarray] = []
    state: dict = {"first": None, "best": None, "leaves": 0}

    def leaf(colors):
        state["leaves"] += 1
        cert = graph.certificate(colors)
        for ref in ("first", "best"):
            got = state[ref]
            if got is not None and got[1] == cert:
                # vertex v sits at position colors[v]; in the reference leaf that
                # position is held by ref_order[colors[v]]
                ref_order = np.argsort(got[0])
                gamma = ref_order[colors]
                if not np.array_equal(gamma, np.arange(graph.n)):
                    gens.append(gamma)
                return
        if state["first"] is None:
            state["first"] = (colors, cert)
        if state["best"] is None or cert < state["best"][1]:
            state["best"] = (colors, cert)

    def search(colors, fixed):
        cell = _target_cell(colors)
        if cell is None:
            leaf(colors)
            return
        done: list[int] = []
        for v in cell:
            v = int(v)
            if done:
                orb = _orbits_fixing(gens, fixed, graph.n)
                if any(orb[v] == orb[u] for u in done):
                    continue
            search(graph.individualize(colors, v), fixed + (v,))
            done.append(v)

    search(graph.refine(graph.initial), ())
    best_colors, best_cert = state["best"]
    return Labeling(best_colors, best_cert, gens, state["leaves"])


def find_isomorphisms(g1: ColoredGraph, g2: ColoredGraph):
    """Yield every bijection ``f`` (as an array ``f[v1] = v2``) that is an
    isomorphism ``g1 -> g2`` reachable by the refinement tree.

    The first path of ``g1`` is fixed; all paths of ``g2`` whose refinement
    trace agrees are explored, so every isomorphism is produced (possibly
    with repetitions when refinement is not discrete on a path).
    """
    if g1.n != g2.n or g1.keys.shape != g2.keys.shape:
        return
    c1 = g1.refine(g1.initial)
    c2 = g2.refine(g2.initial)
    path1 = []  # (colors, target cell colour, chosen vertex)
    colors = c1
    while True:
        cell = _target_cell(colors)
        if cell is None:
            break
        v = int(cell[0])
        path1.append((colors, int(colors[v])))
        colors = g1.individualize(colors, v)
    leaf1 = colors
    cert1 = g1.certificate(leaf1)
    order1 = np.argsort(leaf1)

    def same_trace(a, b):
        return np.array_equal(np.bincount(a), np.bincount(b))

    def rec(depth, colors):
        if not same_trace(colors, path1[depth][0] if depth < len(path1) else leaf1):
            return
        if depth == len(path1):
            if g2.certificate(colors) == cert1:
                order2 = np.argsort(colors)
                f = np.empty(g1.n, dtype=np.int64)
                f[order1] = order2
                yield f
            return
        target = path1[depth][1]
        for w in np.flatnonzero(colors == target):
            yield from rec(depth + 1, g2.individualize(colors, int(w)))

    yield from rec(0, c2)
