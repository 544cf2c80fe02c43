"""
End-to-end driver: orbit matrices -> designs -> codes -> weight reports ->
equivalence classes, with deterministic outputs, wall-clock budgets and
resumable expansion.

Nothing here is random.  Every stream is exhaustive and ordered, so two runs
with the same inputs write byte-identical files whatever the worker count.
"""

from __future__ import annotations

import hashlib
import json
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .codes import TernaryCode, code_from_design
from .designs import DesignParams, IncidenceStructure, ParameterError
from .equivalence import canonical_design, equivalence_classes
from .formats import DesignRecord, FormatError, dump_design
from .gamma import gamma
from .indexer import ExpansionResult, Expander, isomorph_reject
from .orbit_matrix import OrbitMatrix, equivalent, generate_orbit_matrices, load_appendix
from .weights import WeightReport, classify

OM_TARGET_COUNT = 32  # orbit matrices announced for the C6 action on 2-(47,23,11)


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    """Reproducibility envelope of one command."""

    command: str
    parameters: dict
    inputs: dict[str, str] = field(default_factory=dict)  # path -> sha256
    outputs: dict[str, str] = field(default_factory=dict)
    version: str = __version__
    wall_time: float = 0.0
    counts: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        return cls(**json.loads(text))


def write_outputs(out_dir: str | Path, files: dict[str, str], manifest: RunManifest) -> Path:
    """Write ``files`` (name -> text) and the manifest listing their digests."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text)
        manifest.outputs[name] = sha256_text(text)
    path = out / "manifest.json"
    path.write_text(manifest.to_json())
    return path


# ---------------------------------------------------------------------------
# orbit matrices
# ---------------------------------------------------------------------------


@dataclass
class CensusResult:
    matrices: list[OrbitMatrix]
    appendix_found: dict[int, int | None]  # appendix id -> index in ``matrices``
    target: int | None

    @property
    def count_matches(self) -> bool | None:
        return None if self.target is None else len(self.matrices) == self.target


def census(params: DesignParams, n: int, block_sizes, point_sizes, *, target: int | None = None) -> CensusResult:
    """Generate all orbit matrices and locate the appendix matrices among them
    (up to row and column permutations within equal orbit sizes)."""
    oms = generate_orbit_matrices(params, n, block_sizes, point_sizes)
    found: dict[int, int | None] = {}
    for idx in range(1, 5):
        ref = load_appendix(idx)
        same_shape = ref.params == params and ref.group_order == n
        same_shape &= sorted(ref.block_sizes) == sorted(block_sizes)
        same_shape &= sorted(ref.point_sizes) == sorted(point_sizes)
        found[idx] = None
        if same_shape:
            found[idx] = next((i for i, om in enumerate(oms) if equivalent(om, ref)), None)
    return CensusResult(oms, found, target)


# ---------------------------------------------------------------------------
# expansion
# ---------------------------------------------------------------------------


def format_token(source: str, path: tuple[int, ...]) -> str:
    return f"{source}:" + ".".join(map(str, path))


def parse_token(token: str) -> tuple[str, tuple[int, ...]]:
    m = re.fullmatch(r"([^:\s]+):(\d+(?:\.\d+)*)", token.strip())
    if not m:
        raise ParameterError(f"malformed resume token {token!r}; expected SOURCE:i.j.k...")
    return m.group(1), tuple(int(x) for x in m.group(2).split("."))


@dataclass
class ExpandOutcome:
    results: list[ExpansionResult]
    complete: bool  # the whole stream (after the resume point) was visited
    token: str | None  # resume token of the last emitted design when incomplete
    raw_count: int  # designs emitted before isomorph rejection
    elapsed: float


def _branch_worker(om: OrbitMatrix, source: str, visit_order: str, prefix, after):
    ex = Expander(om, source=source, visit_order=visit_order)
    return [(r.choice, r.path) for r in ex.expand(prefix, after=after)]


def run_expand(
    om: OrbitMatrix,
    *,
    source: str = "OM",
    limit: int | None = None,
    budget: float | None = None,
    resume: str | None = None,
    threads: int = 1,
    reject_isomorphs: bool = False,
    visit_order: str = "mixed",
) -> ExpandOutcome:
    """Expand ``om`` in stream order.

    ``limit`` keeps the first designs of the stream.  ``budget`` (seconds) is
    checked after every design (serial) or every finished top-level branch
    (parallel); on expiry the designs found so far are returned with a
    resume token.  With ``threads > 1`` and no limit the top-level branches
    run in worker processes and are merged in stream order.
    """
    start = time.perf_counter()
    after = None
    if resume:
        tok_source, after = parse_token(resume)
        if tok_source != source:
            raise ParameterError(f"resume token is for {tok_source!r}, not {source!r}")
    ex = Expander(om, source=source, visit_order=visit_order)
    results: list[ExpansionResult] = []
    complete = True

    def over_budget() -> bool:
        return budget is not None and time.perf_counter() - start > budget

    if threads > 1 and limit is None:
        branches = ex.top_level_branches(1)
        if after is not None:
            branches = [b for b in branches if b[0] >= after[0]]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(
                    _branch_worker, om, source, visit_order, b,
                    after if after is not None and b[0] == after[0] else None,
                )
                for b in branches
            ]
            for k, fut in enumerate(futures):
                for choice, path in fut.result():
                    rows = ex.rows_from_choice(choice)
                    results.append(ExpansionResult(ex.design_from_rows(rows), ex.action, source, choice, path))
                if over_budget() and k + 1 < len(futures):
                    complete = False
                    for f in futures[k + 1 :]:
                        f.cancel()
                    break
    else:
        for r in ex.expand(after=after):
            results.append(r)
            if limit is not None and len(results) >= limit:
                complete = False
                break
            if over_budget():
                complete = False
                break
    raw = len(results)
    token = None
    if not complete:
        last = results[-1].path if results else after
        token = format_token(source, last) if last else None
    if reject_isomorphs:
        results = isomorph_reject(results)
    return ExpandOutcome(results, complete, token, raw, time.perf_counter() - start)


def designs_text(results: list[ExpansionResult], params: DesignParams) -> str:
    return "\n".join(dump_design(r.design, params, r.provenance()) for r in results)


def record_source(rec: DesignRecord) -> str:
    """Orbit-matrix id from a ``# source X choice ...`` provenance line."""
    if rec.provenance:
        m = re.match(r"#\s*source\s+(\S+)", rec.provenance)
        if m:
            return m.group(1)
    return "unknown"


# ---------------------------------------------------------------------------
# analysis
# ---------------------------------------------------------------------------


@dataclass
class AnalysisRow:
    source: str
    provenance: str | None
    report: WeightReport


def _analyze_worker(matrix: np.ndarray, params: DesignParams) -> WeightReport:
    return classify(code_from_design(IncidenceStructure(matrix), params))


def analyze_designs(records: list[DesignRecord], *, threads: int = 1) -> list[AnalysisRow]:
    """Build the code of every design and classify it (stream order kept)."""
    args = [(r.design.matrix, r.params) for r in records]
    if threads > 1 and len(records) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(_analyze_worker, *zip(*args), chunksize=4))
    else:
        reports = [_analyze_worker(m, p) for m, p in args]
    return [AnalysisRow(record_source(r), r.provenance, rep) for r, rep in zip(records, reports)]


@dataclass
class BetaSummary:
    """Aggregate beta values of near-extremal codes, per source."""

    betas: dict[str, list[int]]  # source -> sorted distinct betas
    near_extremal: dict[str, int]  # source -> number of d=12 codes
    extremal: int
    outside_gamma: dict[str, list[int]]  # betas missing from the published set

    def to_json(self) -> dict:
        return asdict(self)


def beta_summary(rows: list[AnalysisRow]) -> BetaSummary:
    betas: dict[str, set[int]] = {}
    near: dict[str, int] = {}
    extremal = 0
    for row in rows:
        if row.report.classification == "extremal":
            extremal += 1
        if row.report.beta is None:
            continue
        betas.setdefault(row.source, set()).add(row.report.beta)
        near[row.source] = near.get(row.source, 0) + 1
    outside = {}
    for src, vals in betas.items():
        m = re.fullmatch(r"OM([1-4])", src)
        if m:
            outside[src] = sorted(vals - gamma(int(m.group(1))))
    return BetaSummary({s: sorted(v) for s, v in sorted(betas.items())}, dict(sorted(near.items())), extremal, outside)


def reports_text(rows: list[AnalysisRow]) -> str:
    chunks = []
    for row in rows:
        head = (row.provenance + "\n") if row.provenance else ""
        chunks.append(head + row.report.to_text())
    return "\n".join(chunks)


def reports_json(rows: list[AnalysisRow]) -> str:
    payload = [
        {"source": r.source, "provenance": r.provenance, "report": r.report.to_json()} for r in rows
    ]
    return json.dumps(payload, indent=1) + "\n"


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


@dataclass
class DesignClasses:
    keys: list[str]  # canonical key per input design
    aut_orders: list[int]
    global_classes: int
    per_source: dict[str, int]  # classes counted inside each source separately


def classify_designs(records: list[DesignRecord]) -> DesignClasses:
    keys, auts, per = [], [], {}
    for rec in records:
        form = canonical_design(rec.design)
        keys.append(form.key())
        auts.append(form.aut_order)
        per.setdefault(record_source(rec), set()).add(keys[-1])
    return DesignClasses(keys, auts, len(set(keys)), {s: len(v) for s, v in sorted(per.items())})


@dataclass
class CodeClasses:
    labels: list[int]
    n_classes: int
    distinct_a_d: list[int]


def classify_codes(codes: list[TernaryCode]) -> CodeClasses:
    if not codes:
        return CodeClasses([], 0, [])
    labels, forms = equivalence_classes(codes)
    a_d = sorted({f.fingerprint.a_d for f in forms})
    return CodeClasses(labels, max(labels) + 1, a_d)


__all__ = [
    "OM_TARGET_COUNT",
    "AnalysisRow",
    "BetaSummary",
    "CensusResult",
    "CodeClasses",
    "DesignClasses",
    "ExpandOutcome",
    "FormatError",
    "RunManifest",
    "analyze_designs",
    "beta_summary",
    "census",
    "classify_codes",
    "classify_designs",
    "designs_text",
    "format_token",
    "parse_token",
    "record_source",
    "reports_json",
    "reports_text",
    "run_expand",
    "sha256_file",
    "sha256_text",
    "write_outputs",
]
