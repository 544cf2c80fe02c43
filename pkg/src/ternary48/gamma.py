"""
Published sets of beta = A_12 / 8 values for the four orbit matrices.

The sets are kept as the printed text; ``a, ..., b`` denotes the inclusive
range ``a..b``.
"""

from __future__ import annotations

import re
from functools import lru_cache

_TEXT = {
    1: """320, 323, 324, 326, 338, 340, 341, 346, 348, 349, 350, 352, 353, ..., 357,
          359, 360, ..., 468, 470, 471, ..., 480, 482, 483, ..., 486, 489, 490, ..., 494,
          496, 497, ..., 500, 504, 506, 512, 516, 518, 522, 524, 528, 536, 560""",
    2: """313, 329, 331, 332, 333, 334, 337, 338, 339, 343, 344, ..., 349, 351, 352, ..., 450,
          452, 453, ..., 459, 461, 462, 464, 466, 467, 468, 470, 472, 474, 476, 478, 479,
          480, 482, 484, 486, 488, 494, 496, 500, 503, 504, 506, 512, 524, 528, 554, 560""",
    3: """320, 323, 324, 326, 338, 340, 341, 346, 348, 349, 350, 353, ..., 357, 359,
          360, ..., 464, 466, 467, 468, 470, 471, ..., 480, 482, 483, ..., 486, 488, 489, ..., 492,
          494, 496, 497, ..., 500, 504, 506, 512, 516, 522, 524, 528, 536, 560""",
}
_TEXT[4] = _TEXT[2]

_UNION_TEXT = """313, 320, 323, 324, 326, 329, 331, 332, 333, 334, 337, ..., 341,
    343, 344, ..., 468, 470, 471, ..., 480, 482, 483, ..., 486, 488, 489, ..., 494, 496, 497, ..., 500, 503,
    504, 506, 512, 516, 518, 522, 524, 528, 536, 554, 560"""

# column "# Distinct A_12" of the summary table, for comparison
DISTINCT_COUNTS = {1: 165, 2: 152, 3: 161, 4: 152}


def parse_value_list(text: str) -> frozenset[int]:
    """Parse ``"1, 2, 5, ..., 9"`` into ``{1, 2, 5, 6, 7, 8, 9}``."""
    tokens = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    out: set[int] = set()
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "...":
            if not out or i + 1 >= len(tokens) or tokens[i - 1] == "...":
                raise ValueError("range marker needs numbers on both sides")
            lo, hi = int(tokens[i - 1]), int(tokens[i + 1])
            if hi < lo:
                raise ValueError(f"empty range {lo} ... {hi}")
            out.update(range(lo, hi + 1))
            i += 2
            continue
        out.add(int(tok))
        i += 1
    return frozenset(out)


@lru_cache(maxsize=None)
def gamma(index: int) -> frozenset[int]:
    """The published beta set for orbit matrix ``index`` (1..4)."""
    return parse_value_list(_TEXT[index])


@lru_cache(maxsize=None)
def gamma_union() -> frozenset[int]:
    """The beta set of the summarizing proposition."""
    return parse_value_list(_UNION_TEXT)
