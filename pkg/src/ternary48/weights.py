"""
Minimum weight and low-weight codeword counts by information-set enumeration.

The code is covered by information sets ``I_1, I_2, ...`` chosen greedily so
that each set uses as many not-yet-covered coordinates as possible.  For set
``j`` let ``r_j`` be the number of its coordinates that are new.  Enumerating
every message of weight at most ``p_j`` in the systematic generator for
``I_j`` finds every codeword ``c`` with ``wt(c|I_j) <= p_j``; a codeword missed
by all sets has weight at least ``sum_j max(0, p_j + 1 - (k - r_j))``.  This
lower bound drives both early termination of :func:`min_weight` and the depth
selection of :func:`count_weights`.

Codewords are counted once: a word produced while enumerating set ``j`` is
kept only if no earlier set ``j' < j`` could have produced it, i.e. only if
``wt(c|I_j') > p_j'`` for all ``j' < j``.  Only one of ``c, -c`` is generated
(the first nonzero message coefficient is 1) and counts are doubled.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .codes import InvariantViolation, TernaryCode
from .designs import ParameterError
from .gf3 import WORD, TritMatrix, add_planes, n_words, rref, sub_planes

log = logging.getLogger(__name__)

DEFAULT_CEILING = 15
_CHUNK = 1 << 19


class CostGuardError(ParameterError):
    """Requested enumeration exceeds the configured ceiling."""


@dataclass
class InformationSet:
    columns: list[int]
    new: int  # number of columns not covered by earlier sets
    ones: np.ndarray  # systematic generator planes, shape (k, words)
    twos: np.ndarray
    mask: np.ndarray  # coordinate mask of the set, shape (words,)


def information_sets(code: TernaryCode) -> list[InformationSet]:
    n, k = code.n, code.k
    if k == 0:
        raise ParameterError("zero-dimensional code")
    g = code.generator.to_array()
    covered: set[int] = set()
    sets: list[InformationSet] = []
    while len(covered) < n:
        order = [c for c in range(n) if c not in covered] + sorted(covered)
        r, rk, piv = rref(TritMatrix.from_array(g[:, order]))
        cols = [order[p] for p in piv]
        new = sum(1 for c in cols if c not in covered)
        if new == 0:
            break
        sys_ = np.empty_like(g)
        sys_[:, order] = r.to_array()[:rk]
        # row i of the systematic generator has a 1 at cols[i] and 0 on the rest of the set
        t = TritMatrix.from_array(sys_)
        mask = np.zeros(n_words(n), dtype=np.uint64)
        for c in cols:
            mask[c // WORD] |= np.uint64(1) << np.uint64(c % WORD)
        sets.append(InformationSet(cols, new, t.ones, t.twos, mask))
        covered.update(cols)
    return sets


def _contribution(s: InformationSet, k: int, p: int) -> int:
    return max(0, p + 1 - (k - s.new))


def _messages_cost(k: int, p: int) -> int:
    return sum(comb(k, i) * 2 ** max(i - 1, 0) for i in range(1, p + 1))


class _HalfTables:
    """All linear combinations of exactly ``w`` rows of one half of a generator,
    grouped by ``w``; ``proj`` keeps only those whose first coefficient is 1."""

    def __init__(self, ones: np.ndarray, twos: np.ndarray):
        self.rows = ones.shape[0]
        self.words = ones.shape[1]
        self._ones = ones
        self._twos = twos
        z = np.zeros((1, self.words), dtype=np.uint64)
        self.full = {0: (z, z.copy(), np.array([-1]))}
        self.proj = {0: (z, z.copy(), np.array([-1]))}

    def _extend(self, w: int):
        p1, p2, last = self.full[w - 1]
        f1, f2, fl, q1, q2, ql = [], [], [], [], [], []
        for j in range(self.rows):
            sel = last < j
            if not sel.any():
                continue
            a1, a2 = p1[sel], p2[sel]
            r1, r2 = self._ones[j], self._twos[j]
            s1, s2 = add_planes(a1, a2, r1, r2)
            d1, d2 = sub_planes(a1, a2, r1, r2)
            f1 += [s1, d1]
            f2 += [s2, d2]
            fl += [np.full(len(s1), j)] * 2
        self.full[w] = (np.concatenate(f1), np.concatenate(f2), np.concatenate(fl))
        # projective: first coefficient 1 <=> built from a projective (w-1)-table, or w == 1 with +row
        if w == 1:
            # full[1] lists +row_j, -row_j for each j in turn
            f1_, f2_, fl_ = self.full[1]
            keep = np.arange(0, len(fl_), 2)
            self.proj[1] = (f1_[keep], f2_[keep], fl_[keep])
            return
        p1, p2, last = self.proj[w - 1]
        for j in range(self.rows):
            sel = last < j
            if not sel.any():
                continue
            a1, a2 = p1[sel], p2[sel]
            r1, r2 = self._ones[j], self._twos[j]
            s1, s2 = add_planes(a1, a2, r1, r2)
            d1, d2 = sub_planes(a1, a2, r1, r2)
            q1 += [s1, d1]
            q2 += [s2, d2]
            ql += [np.full(len(s1), j)] * 2
        self.proj[w] = (np.concatenate(q1), np.concatenate(q2), np.concatenate(ql))

    def get(self, w: int, projective: bool):
        if w > self.rows:
            return None
        while max(self.full) < w:
            self._extend(max(self.full) + 1)
        t = self.proj if projective else self.full
        return t[w][0], t[w][1]


class _Enumerator:
    """Yields packed chunks of all codewords whose message (w.r.t. one
    information set) has weight exactly ``p``, one per +-pair."""

    def __init__(self, s: InformationSet):
        k = s.ones.shape[0]
        h = k // 2
        self.k = k
        self.left = _HalfTables(s.ones[:h], s.twos[:h])
        self.right = _HalfTables(s.ones[h:], s.twos[h:])

    def chunks(self, p: int):
        for a in range(p + 1):
            b = p - a
            lt = self.left.get(a, projective=a > 0)
            rt = self.right.get(b, projective=a == 0)
            if lt is None or rt is None or len(lt[0]) == 0 or len(rt[0]) == 0:
                continue
            l1, l2 = lt
            r1, r2 = rt
            step = max(1, _CHUNK // len(r1))
            for start in range(0, len(l1), step):
                a1 = l1[start : start + step, None, :]
                a2 = l2[start : start + step, None, :]
                c1, c2 = add_planes(a1, a2, r1[None], r2[None])
                yield c1.reshape(-1, c1.shape[-1]), c2.reshape(-1, c2.shape[-1])


def _weights(c1, c2) -> np.ndarray:
    return np.bitwise_count(c1 | c2).sum(axis=-1, dtype=np.int64)


def _masked_weights(c1, c2, mask) -> np.ndarray:
    return np.bitwise_count((c1 | c2) & mask).sum(axis=-1, dtype=np.int64)


def min_weight(code: TernaryCode, *, return_stats: bool = False):
    """Exact minimum nonzero weight (Brouwer-Zimmermann style)."""
    sets = information_sets(code)
    k = code.k
    # rows of a systematic generator are codewords: a cheap first upper bound
    best = min(int(_weights(s.ones, s.twos).min()) for s in sets)
    enums = [_Enumerator(s) for s in sets]
    examined = 0
    p = 0
    while True:
        p += 1
        if p > k:
            break
        for j, (s, e) in enumerate(zip(sets, enums)):
            lower = sum(
                _contribution(t, k, p if i <= j - 1 else p - 1) for i, t in enumerate(sets)
            )
            if lower >= best:
                break
            if _contribution(s, k, p) == 0:
                continue
            for c1, c2 in e.chunks(p):
                examined += len(c1)
                wmin = int(_weights(c1, c2).min())
                if wmin < best:
                    best = wmin
        lower = sum(_contribution(t, k, p) for t in sets)
        log.debug("level %d done, best=%d lower=%d examined=%d", p, best, lower, examined)
        if lower >= best:
            break
    if return_stats:
        return best, {"examined": examined, "levels": p, "sets": len(sets)}
    return best


def _choose_depths(sets: list[InformationSet], k: int, target: int) -> list[int]:
    """Smallest-cost depths whose lower bound exceeds ``target``."""
    depths = [0] * len(sets)

    def bound():
        return sum(_contribution(s, k, p) for s, p in zip(sets, depths))

    while bound() <= target:
        best_j, best_cost = None, None
        for j, s in enumerate(sets):
            if depths[j] >= k:
                continue
            gain = _contribution(s, k, depths[j] + 1) - _contribution(s, k, depths[j])
            cost = comb(k, depths[j] + 1) * 2 ** depths[j]
            key = (cost / max(gain, 1e-9), j)
            if best_cost is None or key < best_cost:
                best_j, best_cost = j, key
        if best_j is None:
            raise InvariantViolation("cannot reach the required enumeration depth")
        depths[best_j] += 1
    return depths


def count_weights(code: TernaryCode, max_weight: int, *, ceiling: int | None = None) -> dict[int, int]:
    """Exact numbers ``A_w`` for ``1 <= w <= max_weight``.

    Refuses (``CostGuardError``) when ``max_weight`` exceeds the enumeration
    ceiling (default 15 for length 48, the full length otherwise).
    """
    if ceiling is None:
        ceiling = DEFAULT_CEILING if code.n >= 48 else code.n
    if max_weight > ceiling:
        raise CostGuardError(
            f"weight {max_weight} is above the enumeration ceiling {ceiling}; "
            "raise the ceiling explicitly if the cost is acceptable"
        )
    sets = information_sets(code)
    k = code.k
    # coordinates outside every set are zero in all codewords
    support = sum(s.new for s in sets)
    depths = _choose_depths(sets, k, min(max_weight, support))
    log.debug("depths %s for weights <= %d", depths, max_weight)
    hist = np.zeros(code.n + 1, dtype=np.int64)
    for j, s in enumerate(sets):
        if depths[j] == 0:
            continue
        e = _Enumerator(s)
        earlier = [(sets[i].mask, depths[i]) for i in range(j)]
        for p in range(1, depths[j] + 1):
            for c1, c2 in e.chunks(p):
                w = _weights(c1, c2)
                keep = w <= max_weight
                for mask, dep in earlier:
                    if not keep.any():
                        break
                    keep &= _masked_weights(c1, c2, mask) > dep
                if keep.any():
                    hist += np.bincount(w[keep], minlength=code.n + 1)
    counts = {w: 2 * int(hist[w]) for w in range(1, max_weight + 1)}
    if code.self_dual:
        bad = [w for w, a in counts.items() if a and w % 3]
        if bad:
            raise InvariantViolation(f"self-dual code has words of weight {bad}")
    return counts


def count_weight(code: TernaryCode, w: int, *, ceiling: int | None = None) -> int:
    return count_weights(code, w, ceiling=ceiling)[w]


def low_weight_words(
    code: TernaryCode, w: int, *, ceiling: int | None = None, lowest: int | None = None
) -> np.ndarray:
    """All codewords of weight exactly ``w`` (both signs) as a uint8 array.

    With ``lowest`` set, all nonzero words of weight ``lowest .. w`` are
    returned from a single enumeration.
    """
    lo = w if lowest is None else max(1, lowest)
    if ceiling is None:
        ceiling = DEFAULT_CEILING if code.n >= 48 else code.n
    if w > ceiling:
        raise CostGuardError(f"weight {w} is above the enumeration ceiling {ceiling}")
    sets = information_sets(code)
    k = code.k
    depths = _choose_depths(sets, k, min(w, sum(s.new for s in sets)))
    found1, found2 = [], []
    for j, s in enumerate(sets):
        if depths[j] == 0:
            continue
        e = _Enumerator(s)
        earlier = [(sets[i].mask, depths[i]) for i in range(j)]
        for p in range(1, depths[j] + 1):
            for c1, c2 in e.chunks(p):
                wt = _weights(c1, c2)
                keep = (wt >= lo) & (wt <= w)
                for mask, dep in earlier:
                    keep &= _masked_weights(c1, c2, mask) > dep
                if keep.any():
                    found1.append(c1[keep])
                    found2.append(c2[keep])
    if not found1:
        return np.zeros((0, code.n), dtype=np.uint8)
    from .gf3 import unpack

    half = unpack(np.concatenate(found1), np.concatenate(found2), code.n)
    words = np.concatenate([half, (3 - half) % 3]).astype(np.uint8)
    # deterministic order
    order = np.lexsort(words.T[::-1])
    return words[order]


# ---------------------------------------------------------------------------
# brute force (oracle)
# ---------------------------------------------------------------------------


def all_codewords(code: TernaryCode) -> np.ndarray:
    k = code.k
    if k > 12:
        raise CostGuardError(f"3^{k} codewords is too many to list")
    msgs = np.array(np.unravel_index(np.arange(3**k), (3,) * k)).T
    return (msgs @ code.generator.to_array().astype(np.int64)) % 3


def weight_distribution_bruteforce(code: TernaryCode) -> np.ndarray:
    words = all_codewords(code)
    return np.bincount(np.count_nonzero(words, axis=1), minlength=code.n + 1)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

BETA_MAX = 4324


@dataclass
class WeightReport:
    n: int
    k: int
    d: int
    counts: dict[int, int] = field(default_factory=dict)
    classification: str = "neither"
    beta: int | None = None

    def to_text(self) -> str:
        lines = [
            f"n={self.n}",
            f"k={self.k}",
            f"d={self.d}",
            f"classification={self.classification}",
            "counts=" + ",".join(f"{w}:{a}" for w, a in sorted(self.counts.items())),
            f"beta={'' if self.beta is None else self.beta}",
        ]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "WeightReport":
        kv = dict(line.split("=", 1) for line in text.strip().splitlines())
        counts = {}
        if kv["counts"]:
            for item in kv["counts"].split(","):
                w, a = item.split(":")
                counts[int(w)] = int(a)
        return cls(
            n=int(kv["n"]),
            k=int(kv["k"]),
            d=int(kv["d"]),
            counts=counts,
            classification=kv["classification"],
            beta=int(kv["beta"]) if kv["beta"] else None,
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "classification": self.classification,
            "counts": {str(w): a for w, a in sorted(self.counts.items())},
            "beta": self.beta,
        }

    @classmethod
    def from_json(cls, obj) -> "WeightReport":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(
            n=obj["n"],
            k=obj["k"],
            d=obj["d"],
            counts={int(w): a for w, a in obj["counts"].items()},
            classification=obj["classification"],
            beta=obj["beta"],
        )


def classification_label(n: int, d: int) -> str:
    if n % 12:
        return "neither"
    if d == n // 4 + 3:
        return "extremal"
    if d == n // 4:
        return "near_extremal"
    return "neither"


def classify(code: TernaryCode, *, d: int | None = None) -> WeightReport:
    """Minimum weight, ``A_d`` and the extremal / near-extremal label."""
    if d is None:
        d = min_weight(code)
    counts = count_weights(code, d, ceiling=max(d, DEFAULT_CEILING))
    counts = {w: a for w, a in counts.items() if a or w == d}
    label = classification_label(code.n, d)
    report = WeightReport(code.n, code.k, d, counts, label)
    if label == "near_extremal" and code.n == 48:
        a12 = counts[12]
        if a12 % 8:
            raise InvariantViolation(f"A_12 = {a12} is not divisible by 8")
        beta = a12 // 8
        if not 1 <= beta <= BETA_MAX:
            raise InvariantViolation(f"beta = {beta} outside 1..{BETA_MAX}")
        report.beta = beta
    return report


def support_one_design_check(code: TernaryCode, w: int, *, ceiling: int | None = None):
    """Do the supports of the weight-``w`` words form a 1-design?

    Each +-pair contributes its support once; distinct pairs with the same
    support count as repeated blocks.  Returns ``(is_one_design, replication)``
    with ``replication[i]`` the number of supports containing coordinate ``i``.
    """
    words = low_weight_words(code, w, ceiling=ceiling)
    # one word per +-pair: the one whose first nonzero entry is 1
    first = words[np.arange(len(words)), (words != 0).argmax(axis=1)] if len(words) else []
    rep = words[np.asarray(first) == 1] if len(words) else words
    replication = (rep != 0).sum(axis=0).astype(np.int64)
    return bool(len(set(replication.tolist())) <= 1), replication
