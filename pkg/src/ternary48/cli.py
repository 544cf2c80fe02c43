"""
Command line interface.

Verbs: generate-om, expand, build-code, analyze, classify-equiv, verify-paper.
Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .codes import code_from_design
from .designs import DesignParams, ParameterError
from .formats import dump_code, dump_orbit_matrix, load_codes, load_designs, load_orbit_matrix
from .orbit_matrix import C6_SIZES, load_appendix
from .pipeline import (
    OM_TARGET_COUNT,
    RunManifest,
    analyze_designs,
    beta_summary,
    census,
    classify_codes,
    classify_designs,
    designs_text,
    reports_json,
    reports_text,
    run_expand,
    sha256_file,
    write_outputs,
)

log = logging.getLogger("ternary48")


def _default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def _sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"orbit sizes must be integers: {text!r}") from exc


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _read_inputs(paths: list[str]) -> tuple[list[str], dict[str, str]]:
    texts, digests = [], {}
    for p in paths:
        path = Path(p)
        if not path.is_file():
            raise ParameterError(f"no such input file: {p}")
        texts.append(path.read_text())
        digests[str(p)] = sha256_file(path)
    return texts, digests


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------


def cmd_generate_om(args) -> int:
    params = DesignParams(args.v, args.k, args.lam)
    block = args.block_sizes or C6_SIZES
    point = args.point_sizes or block
    default_params = (params, args.n, tuple(sorted(block)), tuple(sorted(point))) == (
        DesignParams(47, 23, 11), 6, C6_SIZES, C6_SIZES,
    )
    target = args.target if args.target is not None else (OM_TARGET_COUNT if default_params else None)
    t0 = time.perf_counter()
    res = census(params, args.n, block, point, target=target)
    files = {f"om_{i + 1:03d}.txt": dump_orbit_matrix(om) for i, om in enumerate(res.matrices)}
    found = {f"OM{k}": (None if v is None else v + 1) for k, v in res.appendix_found.items()}
    counts = {"orbit_matrices": len(res.matrices), "target": target, "appendix_found": found}
    manifest = RunManifest(
        "generate-om",
        {"v": params.v, "k": params.k, "lambda": params.lam, "n": args.n,
         "block_sizes": list(block), "point_sizes": list(point)},
        counts=counts,
    )
    if args.out_dir:
        manifest.wall_time = time.perf_counter() - t0
        write_outputs(args.out_dir, files, manifest)
    lines = [f"orbit matrices: {len(res.matrices)}"]
    if target is not None:
        flag = "matches" if res.count_matches else "MISMATCH with"
        lines.append(f"count {flag} target {target}")
    if default_params:
        lines += [f"OM{k} found as #{v}" if v else f"OM{k} NOT FOUND" for k, v in
                  ((k, found[f"OM{k}"]) for k in range(1, 5))]
    if not args.out_dir:
        lines += ["", *files.values()]
    _emit(args, counts, "\n".join(lines))
    return 0


def _load_om(args):
    if args.appendix:
        return load_appendix(args.appendix), f"OM{args.appendix}"
    if not args.om_file:
        raise ParameterError("give an orbit-matrix file or --appendix 1..4")
    texts, _ = _read_inputs([args.om_file])
    return load_orbit_matrix(texts[0]), args.source or Path(args.om_file).stem


def cmd_expand(args) -> int:
    om, source = _load_om(args)
    if args.source:
        source = args.source
    out = run_expand(
        om,
        source=source,
        limit=args.limit,
        budget=args.budget,
        resume=args.resume,
        threads=args.threads,
        reject_isomorphs=args.isomorph_reject,
        visit_order=args.visit_order,
    )
    text = designs_text(out.results, om.params)
    counts = {
        "designs_emitted": out.raw_count,
        "designs_written": len(out.results),
        "complete": out.complete,
        "resume_token": out.token,
    }
    manifest = RunManifest(
        "expand",
        {"source": source, "limit": args.limit, "isomorph_reject": args.isomorph_reject,
         "resume": args.resume, "visit_order": args.visit_order,
         "orbit_matrix": dump_orbit_matrix(om)},
        inputs={args.om_file: sha256_file(args.om_file)} if args.om_file else {},
        wall_time=out.elapsed,
        counts=counts,
    )
    if args.out_dir:
        write_outputs(args.out_dir, {"designs.txt": text}, manifest)
        summary = [f"{len(out.results)} designs written to {Path(args.out_dir) / 'designs.txt'}"]
    else:
        summary = [text] if text else []
    if out.token:
        summary.append(f"# stopped early; resume with --resume {out.token}")
    if args.format == "json":
        _emit(args, counts, "")
    else:
        print("\n".join(summary))
    return 0


def cmd_build_code(args) -> int:
    texts, digests = _read_inputs(args.designs)
    codes = []
    for text in texts:
        for rec in load_designs(text):
            codes.append((rec.provenance, code_from_design(rec.design, rec.params)))
    text = "\n".join((p + "\n" if p else "") + dump_code(c) for p, c in codes)
    manifest = RunManifest("build-code", {}, inputs=digests, counts={"codes": len(codes)})
    if args.out_dir:
        write_outputs(args.out_dir, {"codes.txt": text}, manifest)
        _emit(args, manifest.counts, f"{len(codes)} codes written")
    else:
        _emit(args, manifest.counts, text)
    return 0


def cmd_analyze(args) -> int:
    texts, digests = _read_inputs(args.designs)
    records = [rec for text in texts for rec in load_designs(text)]
    t0 = time.perf_counter()
    rows = analyze_designs(records, threads=args.threads)
    summary = beta_summary(rows)
    counts = {
        "codes": len(rows),
        "near_extremal": summary.near_extremal,
        "extremal": summary.extremal,
        "distinct_beta": {s: len(v) for s, v in summary.betas.items()},
        "outside_gamma": summary.outside_gamma,
    }
    manifest = RunManifest("analyze", {}, inputs=digests, wall_time=time.perf_counter() - t0, counts=counts)
    files = {"reports.txt": reports_text(rows), "reports.json": reports_json(rows),
             "betas.json": json.dumps(summary.to_json(), indent=1, sort_keys=True) + "\n"}
    if args.out_dir:
        write_outputs(args.out_dir, files, manifest)
    lines = [f"codes analyzed: {len(rows)}, extremal: {summary.extremal}"]
    for src, vals in summary.betas.items():
        lines.append(f"{src}: {summary.near_extremal[src]} codes with d=12, {len(vals)} distinct beta, "
                     f"range {vals[0]}..{vals[-1]}")
        if src in summary.outside_gamma:
            bad = summary.outside_gamma[src]
            lines.append(f"{src}: beta outside published set: {bad}" if bad else f"{src}: all beta in published set")
    if not args.out_dir:
        lines += ["", files["reports.txt"]]
    payload = {"summary": summary.to_json(), "reports": json.loads(files["reports.json"])}
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_classify_equiv(args) -> int:
    if not args.designs and not args.codes:
        raise ParameterError("give --designs and/or --codes files")
    payload: dict = {}
    lines = []
    if args.designs:
        texts, _ = _read_inputs(args.designs)
        records = [rec for text in texts for rec in load_designs(text)]
        dc = classify_designs(records)
        payload["designs"] = {"count": len(records), "classes": dc.global_classes,
                              "per_source": dc.per_source, "aut_orders": sorted(set(dc.aut_orders))}
        lines.append(f"designs: {len(records)}, non-isomorphic: {dc.global_classes}")
        lines += [f"  {s}: {c} classes" for s, c in dc.per_source.items()]
        lines.append(f"  automorphism group orders seen: {sorted(set(dc.aut_orders))}")
    if args.codes:
        texts, _ = _read_inputs(args.codes)
        codes = [c for text in texts for c in load_codes(text)]
        cc = classify_codes(codes)
        payload["codes"] = {"count": len(codes), "classes": cc.n_classes, "labels": cc.labels,
                            "distinct_A_d": len(cc.distinct_a_d)}
        lines.append(f"codes: {len(codes)}, inequivalent: {cc.n_classes}, distinct A_d: {len(cc.distinct_a_d)}")
        lines.append("  class labels: " + " ".join(map(str, cc.labels)))
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_verify_paper(args) -> int:
    from .verify import run_criteria

    results = run_criteria(args.tier, threads=args.threads, budget=args.budget)
    payload = {str(r.number): {"name": r.name, "passed": r.passed, "detail": r.detail} for r in results}
    _emit(args, payload, "\n".join(r.line() for r in results))
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out-dir", default=None, help="write output files and manifest.json here")
    common.add_argument("--threads", type=int, default=_default_threads(), help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="ternary48", description=__doc__.strip().splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    g = sub.add_parser("generate-om", parents=[common], help="enumerate orbit matrices")
    g.add_argument("--v", type=int, default=47)
    g.add_argument("--k", type=int, default=23)
    g.add_argument("--lam", type=int, default=11)
    g.add_argument("--n", type=int, default=6, help="order of the cyclic group")
    g.add_argument("--block-sizes", type=_sizes, default=None)
    g.add_argument("--point-sizes", type=_sizes, default=None)
    g.add_argument("--target", type=int, default=None, help="expected count (reported, not enforced)")
    g.set_defaults(func=cmd_generate_om)

    e = sub.add_parser("expand", parents=[common], help="expand an orbit matrix into designs")
    e.add_argument("om_file", nargs="?")
    e.add_argument("--appendix", type=int, choices=(1, 2, 3, 4), help="use a bundled orbit matrix")
    e.add_argument("--source", default=None, help="provenance label (default: file stem or OMi)")
    e.add_argument("--limit", type=int, default=None)
    e.add_argument("--isomorph-reject", action="store_true")
    e.add_argument("--budget", type=float, default=None, help="wall-clock seconds")
    e.add_argument("--resume", default=None, help="token printed by an interrupted run")
    e.add_argument("--visit-order", choices=("mixed", "lex"), default="mixed")
    e.set_defaults(func=cmd_expand)

    b = sub.add_parser("build-code", parents=[common], help="codes [M|1] of design files")
    b.add_argument("designs", nargs="+")
    b.set_defaults(func=cmd_build_code)

    a = sub.add_parser("analyze", parents=[common], help="weight reports and beta sets")
    a.add_argument("designs", nargs="+")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("classify-equiv", parents=[common], help="isomorphism / equivalence classes")
    c.add_argument("--designs", nargs="+", default=[])
    c.add_argument("--codes", nargs="+", default=[])
    c.set_defaults(func=cmd_classify_equiv)

    v = sub.add_parser("verify-paper", parents=[common], help="run the acceptance criteria")
    v.add_argument("--tier", choices=("fast", "full"), default="fast")
    v.add_argument("--budget", type=float, default=None, help="seconds per long expansion (full tier)")
    v.set_defaults(func=cmd_verify_paper)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits with 2 on usage errors
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if getattr(args, "limit", None) is not None and args.limit < 0:
        print("error: --limit must be non-negative", file=sys.stderr)
        return 2
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except ParameterError as exc:  # includes FormatError and CostGuardError
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
