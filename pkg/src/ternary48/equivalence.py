"""
Design isomorphism and monomial equivalence of ternary codes.

Designs are canonized through their bipartite point/block incidence graph.
Codes are canonized through a *signed coordinate graph*: one vertex per pair
(coordinate, sign) and, between two vertices, the number of low-weight
codewords taking those signs at those coordinates.  Low-weight words only
steer the refinement; leaves are compared by the whole code, so the search
covers every monomial map and its answer does not depend on the low-weight
words generating the code.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass

import numpy as np

from .codes import InvariantViolation, TernaryCode
from .designs import IncidenceStructure
from .gf3 import rref_naive
from .refine import ColoredGraph, canonical_labeling
from .weights import CostGuardError, DEFAULT_CEILING, all_codewords, low_weight_words, min_weight

log = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# designs
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    canonical_matrix: IncidenceStructure
    aut_order: int
    relabeling: tuple[np.ndarray, np.ndarray]  # (point_perm, block_perm)

    def key(self) -> str:
        m = self.canonical_matrix.matrix
        return f"{m.shape[0]}x{m.shape[1]}:" + np.packbits(m).tobytes().hex()

    def to_line(self) -> str:
        digest = hashlib.sha256(self.key().encode()).hexdigest()
        return f"canon {digest} aut {self.aut_order}"

    def __eq__(self, other) -> bool:
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        return self.canonical_matrix == other.canonical_matrix and self.aut_order == other.aut_order

    def __hash__(self) -> int:
        return hash(self.canonical_matrix)


def _triple_histograms(m: np.ndarray, length: int) -> np.ndarray:
    """Row ``i``: histogram of ``|R_i & R_j & R_k|`` over all ``j, k``."""
    m = m.astype(np.int64)
    out = np.zeros((m.shape[0], length), dtype=np.int64)
    for i in range(m.shape[0]):
        t = (m * m[i]) @ m.T
        out[i] = np.bincount(t.ravel(), minlength=length)[:length]
    return out


def design_graph(d: IncidenceStructure) -> ColoredGraph:
    """Bipartite incidence graph: points ``0..v-1``, then blocks."""
    m = d.matrix.astype(np.int64)
    b, v = m.shape
    adj = np.zeros((v + b, v + b), dtype=np.int64)
    adj[:v, v:] = m.T
    adj[v:, :v] = m
    length = max(v, b) + 1
    keys = np.zeros((v + b, length + 1), dtype=np.int64)
    keys[v:, 0] = 1
    keys[:v, 1:] = _triple_histograms(m.T, length)
    keys[v:, 1:] = _triple_histograms(m, length)
    return ColoredGraph(adj, keys)


def canonical_design(d: IncidenceStructure) -> CanonicalForm:
    """Canonical form and automorphism-group order of an incidence structure."""
    lab = canonical_labeling(design_graph(d))
    v = d.v
    point_perm = lab.colors[:v].copy()
    block_perm = lab.colors[v:] - v
    canon = d.permuted(point_perm, block_perm)
    return CanonicalForm(canon, lab.group_order(), (point_perm, block_perm))


def isomorphic_designs(a: IncidenceStructure, b: IncidenceStructure) -> bool:
    if a.matrix.shape != b.matrix.shape:
        return False
    return canonical_design(a).canonical_matrix == canonical_design(b).canonical_matrix


def design_aut_order_bruteforce(d: IncidenceStructure) -> int:
    """Count point permutations preserving the block multiset (small v only)."""
    from itertools import permutations

    m = d.matrix
    if d.v > 9:
        raise CostGuardError("brute-force automorphism count limited to v <= 9")
    target = sorted(m.tobytes()[i * d.v : (i + 1) * d.v] for i in range(d.b))
    count = 0
    for p in permutations(range(d.v)):
        img = np.empty_like(m)
        img[:, list(p)] = m
        if sorted(img.tobytes()[i * d.v : (i + 1) * d.v] for i in range(d.b)) == target:
            count += 1
    return count


# ---------------------------------------------------------------------------
# code fingerprints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CodeFingerprint:
    n: int
    k: int
    d: int
    a_d: int
    intersections: tuple[tuple[int, int], ...]  # (|supp u & supp v|, number of pairs)
    degrees: tuple[int, ...]

    def to_line(self) -> str:
        inter = ",".join(f"{s}:{c}" for s, c in self.intersections)
        deg = ",".join(map(str, self.degrees))
        return f"fp n={self.n} k={self.k} d={self.d} A={self.a_d} I={inter} D={deg}"


def _words_of_weight(code: TernaryCode, w: int) -> np.ndarray:
    if code.k <= 10:
        words = all_codewords(code)
        return words[(words != 0).sum(axis=1) == w]
    return low_weight_words(code, w, ceiling=max(w, DEFAULT_CEILING) if code.n < 48 else None)


def _one_per_pair(words: np.ndarray) -> np.ndarray:
    if not len(words):
        return words
    first = words[np.arange(len(words)), (words != 0).argmax(axis=1)]
    return words[first == 1]


def _intersection_histogram(supports: np.ndarray) -> np.ndarray:
    s = supports.astype(np.float32)
    n = s.shape[1]
    hist = np.zeros(n + 1, dtype=np.int64)
    step = 2048
    for a in range(0, len(s), step):
        block = np.rint(s[a : a + step] @ s[a:].T).astype(np.int64)
        # keep pairs (i, j) with i < j in global numbering
        rows = np.arange(block.shape[0])[:, None]
        cols = np.arange(block.shape[1])[None, :]
        hist += np.bincount(block[cols > rows], minlength=n + 1)
    return hist


def fingerprint(code: TernaryCode, *, d: int | None = None) -> CodeFingerprint:
    if d is None:
        d = min_weight(code)
    words = _words_of_weight(code, d)
    supports = (_one_per_pair(words) != 0).astype(np.uint8)
    hist = _intersection_histogram(supports)
    inter = tuple((i, int(c)) for i, c in enumerate(hist) if c)
    degrees = tuple(sorted(supports.sum(axis=0).astype(int).tolist()))
    return CodeFingerprint(code.n, code.k, d, len(words), inter, degrees)


# ---------------------------------------------------------------------------
# monomial equivalence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Transporter:
    """Monomial map: coordinate ``i`` goes to ``perm[i]`` after scaling by
    ``signs[i]`` (1 or 2)."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def apply(self, code: TernaryCode) -> TernaryCode:
        return code.permuted(self.perm, self.signs)

    def apply_words(self, words: np.ndarray) -> np.ndarray:
        w = np.asarray(words, dtype=np.int64) * np.asarray(self.signs, dtype=np.int64)
        out = np.empty_like(w)
        out[..., np.asarray(self.perm)] = w
        return (out % 3).astype(np.uint8)

    def inverse(self) -> "Transporter":
        n = len(self.perm)
        perm = [0] * n
        signs = [0] * n
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            perm[p] = i
            signs[p] = s  # 1 and 2 are their own inverses
        return Transporter(tuple(perm), tuple(signs))

    def then(self, other: "Transporter") -> "Transporter":
        """Apply ``self`` first, then ``other``."""
        perm = tuple(other.perm[p] for p in self.perm)
        signs = tuple((s * other.signs[p]) % 3 for p, s in zip(self.perm, self.signs))
        return Transporter(perm, signs)


def _structure_words(code: TernaryCode, d: int, depth: int, max_words: int) -> np.ndarray:
    """Codewords used to build the signed graph: all of them for small
    dimension, otherwise weights ``d .. d + depth`` while the total stays
    below ``max_words`` (weight ``d`` is always included).  The selection
    depends only on weight counts, so it is invariant."""
    if code.k <= 10:
        words = all_codewords(code)
        return words[(words != 0).any(axis=1)]
    top = min(d + depth, code.n)
    ceiling = max(top, DEFAULT_CEILING) if code.n < 48 else None
    while True:
        try:
            words = low_weight_words(code, top, ceiling=ceiling, lowest=d)
            break
        except CostGuardError:
            if top == d:
                raise
            top -= 1
    weights = (words != 0).sum(axis=1)
    while top > d and len(words) > max_words:
        top -= 1
        keep = weights <= top
        words, weights = words[keep], weights[keep]
    return words


def _signed_counts(words: np.ndarray, n: int) -> np.ndarray:
    counts = np.zeros((2 * n, 2 * n), dtype=np.int64)
    for a in range(0, len(words), 65536):
        sel = words[a : a + 65536]
        ind = np.zeros((len(sel), 2 * n), dtype=np.float64)
        rows, cols = np.nonzero(sel)
        ind[rows, 2 * cols + sel[rows, cols].astype(np.int64) - 1] = 1.0
        counts += np.rint(ind.T @ ind).astype(np.int64)
    return counts


class CodeGraph(ColoredGraph):
    """Signed coordinate graph of a code with code-aware refinement.

    Vertex ``2i + s`` stands for coordinate ``i`` carrying value ``s + 1``.
    The edge colour between two vertices encodes, for each selected weight,
    the number of words taking both values; the two vertices of a
    coordinate are joined by a reserved colour.

    Once some coordinates are singled out, their columns (scaled so that the
    lower-coloured vertex reads as value 1) are reduced greedily to a basis
    in colour order, and every vertex is keyed by the coordinates of its
    scaled column in that basis.  Leaves are certified by the code itself in
    the leaf's coordinate order, so equal certificates mean equal codes.
    """

    def __init__(self, code: TernaryCode, words: np.ndarray):
        n = code.n
        weights = (words != 0).sum(axis=1)
        levels = sorted(set(weights.tolist()))
        layers = [_signed_counts(words[weights == w], n) for w in levels]
        if layers:
            stacked = np.stack(layers, axis=-1).reshape(-1, len(layers))
            _, inv = np.unique(stacked, axis=0, return_inverse=True)
            colour = inv.reshape(-1) + 1
            empty = (stacked == 0).all(axis=1)
            colour[empty] = 0
            colour = colour.reshape(2 * n, 2 * n)
        else:
            colour = np.zeros((2 * n, 2 * n), dtype=np.int64)
        pair = int(colour.max()) + 1
        idx = np.arange(n)
        colour[2 * idx, 2 * idx + 1] = pair
        colour[2 * idx + 1, 2 * idx] = pair
        super().__init__(colour)
        self.code = code
        g = code.generator.to_array().astype(np.int64)
        self._gen = g
        # column of vertex 2i+s is (s+1) * g[:, i]
        self._vertex_cols = np.repeat(g, 2, axis=1) * np.tile([1, 2], n)[None, :] % 3

    def _frame(self, colors: np.ndarray):
        col = colors.reshape(-1, 2)
        ref = col.min(axis=1)
        refval = np.where(col[:, 0] < col[:, 1], 1, 2)
        return ref, refval

    def extra_keys(self, colors: np.ndarray) -> np.ndarray | None:
        counts = np.bincount(colors)
        col = colors.reshape(-1, 2)
        single = np.flatnonzero((counts[col[:, 0]] == 1) & (counts[col[:, 1]] == 1))
        if len(single) == 0 or len(single) == len(col):
            return None
        ref, refval = self._frame(colors)
        single = single[np.argsort(ref[single])]
        x = self._gen[:, single] * refval[single][None, :] % 3
        r, _, piv = rref_naive(np.concatenate([x, self._vertex_cols], axis=1))
        b = sum(1 for p in piv if p < len(single))
        y = r[:, len(single) :]
        in_span = ~y[b:].any(axis=0)
        keys = np.full((self.n, b + 1), -1, dtype=np.int64)
        keys[:, 0] = in_span
        keys[in_span, 1:] = y[:b, in_span].T
        return keys

    def certificate(self, colors: np.ndarray) -> bytes:
        return super().certificate(colors) + self.leaf_code(colors).generator.to_array().tobytes()

    def leaf_transporter(self, colors: np.ndarray) -> "Transporter":
        """Monomial map taking the code to its form at this leaf."""
        ref, refval = self._frame(colors)
        pos = np.empty(len(ref), dtype=np.int64)
        pos[np.argsort(ref)] = np.arange(len(ref))
        return Transporter(tuple(int(p) for p in pos), tuple(int(v) for v in refval))

    def leaf_code(self, colors: np.ndarray) -> TernaryCode:
        return self.leaf_transporter(colors).apply(self.code)


@dataclass
class CodeCanonicalForm:
    code: TernaryCode
    fingerprint: CodeFingerprint
    canonical_code: TernaryCode
    transporter: Transporter  # code -> canonical_code
    aut_order: int  # order of the monomial automorphism group

    def key(self) -> str:
        g = self.canonical_code.generator.to_array()
        return hashlib.sha256(g.tobytes()).hexdigest()


def canonical_code(
    code: TernaryCode, *, depth: int = 3, max_words: int = 200_000, d: int | None = None
) -> CodeCanonicalForm:
    """Canonical representative of the monomial class of ``code``."""
    fp = fingerprint(code, d=d)
    graph = CodeGraph(code, _structure_words(code, fp.d, depth, max_words))
    lab = canonical_labeling(graph)
    t = graph.leaf_transporter(lab.colors)
    canon = t.apply(code)
    return CodeCanonicalForm(code, fp, canon, t, lab.group_order())


def monomially_equivalent(
    c1: TernaryCode,
    c2: TernaryCode,
    *,
    depth: int = 3,
    max_words: int = 200_000,
) -> tuple[bool, Transporter | None]:
    """Decide monomial equivalence; on success return a verified transporter.

    Both codes are brought to canonical form; they are equivalent exactly
    when the canonical codes coincide, and the transporter is the first
    canonizing map followed by the inverse of the second.
    """
    if (c1.n, c1.k) != (c2.n, c2.k):
        return False, None
    fp1 = fingerprint(c1)
    fp2 = fingerprint(c2)
    if fp1 != fp2:
        return False, None
    k1 = canonical_code(c1, depth=depth, max_words=max_words, d=fp1.d)
    k2 = canonical_code(c2, depth=depth, max_words=max_words, d=fp2.d)
    if k1.canonical_code != k2.canonical_code:
        return False, None
    t = k1.transporter.then(k2.transporter.inverse())
    if t.apply(c1) != c2:
        raise InvariantViolation("transporter failed re-encoding check")
    return True, t


def equivalence_classes(
    codes: list[TernaryCode], *, depth: int = 3, max_words: int = 200_000
) -> tuple[list[int], list[CodeCanonicalForm]]:
    """Partition ``codes`` into monomial equivalence classes.

    Returns the class index of every code (classes numbered in order of first
    appearance) and the canonical forms, whose transporters compose to
    witnesses between any two members of a class.
    """
    forms = [canonical_code(c, depth=depth, max_words=max_words) for c in codes]
    index: dict[str, int] = {}
    labels = []
    for f in forms:
        labels.append(index.setdefault(f.key(), len(index)))
    return labels, forms


def monomial_equivalent_bruteforce(c1: TernaryCode, c2: TernaryCode) -> tuple[bool, int]:
    """Try all ``n! * 2^n`` monomial maps (small ``n`` only).

    Returns whether one maps ``c1`` onto ``c2`` and how many do.
    """
    from itertools import permutations, product

    n = c1.n
    if n > 8:
        raise CostGuardError("brute-force monomial search limited to n <= 8")
    if (c1.n, c1.k) != (c2.n, c2.k):
        return False, 0
    g = c1.generator.to_array().astype(np.int64)
    h = c2.parity_check().to_array().astype(np.int64)
    if h.shape[0] == 0:
        return True, 2**n * int(np.prod(np.arange(1, n + 1)))
    signs = np.array(list(product((1, 2), repeat=n)), dtype=np.int64)  # (2^n, n)
    perms = np.array(list(permutations(range(n))), dtype=np.int64)
    total = 0
    for a in range(0, len(perms), 2048):
        p = perms[a : a + 2048]
        # image row r has entry sign_i * g[r, i] at position p[i]; its product
        # with parity row s is sum_i sign_i * g[r, i] * h[s, p[i]]
        t = g[None, :, None, :] * h[:, p].transpose(1, 0, 2)[:, None, :, :]  # (P, k, m, n)
        prod = (t.reshape(len(p), -1, n) @ signs.T) % 3  # (P, k*m, 2^n)
        total += int((~prod.any(axis=1)).sum())
    return total > 0, total
