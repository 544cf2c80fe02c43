"""
Plain-text file formats.

* orbit matrix: ``v k lambda n`` / block orbit sizes / point orbit sizes /
  one line per row
* design: ``v k lambda`` / one 0-1 string per block
* code: ``n k`` / one generator row per line over ``012``
* weight report: ``key=value`` lines (see :class:`~ternary48.weights.WeightReport`)

Files may hold several records separated by blank lines.  Lines starting with
``#`` are comments; a design record keeps its ``# source`` provenance line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import TernaryCode
from .designs import DesignParams, IncidenceStructure, ParameterError
from .gf3 import TritMatrix
from .orbit_matrix import OrbitMatrix
from .weights import WeightReport


class FormatError(ParameterError):
    """Malformed input file."""


def _records(text: str) -> list[list[str]]:
    out: list[list[str]] = []
    cur: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            if cur:
                out.append(cur)
                cur = []
            continue
        cur.append(line)
    if cur:
        out.append(cur)
    return out


def _ints(line: str, what: str) -> list[int]:
    try:
        return [int(x) for x in line.split()]
    except ValueError as exc:
        raise FormatError(f"{what}: expected integers, got {line!r}") from exc


def _data_lines(record: list[str]) -> list[str]:
    return [x for x in record if not x.startswith("#")]


# ---------------------------------------------------------------------------
# orbit matrices
# ---------------------------------------------------------------------------


def dump_orbit_matrix(om: OrbitMatrix) -> str:
    p = om.params
    lines = [
        f"{p.v} {p.k} {p.lam} {om.group_order}",
        " ".join(map(str, om.block_sizes)),
        " ".join(map(str, om.point_sizes)),
    ]
    lines += [" ".join(map(str, row)) for row in om.s]
    return "\n".join(lines) + "\n"


def _parse_orbit_matrix(record: list[str]) -> OrbitMatrix:
    lines = _data_lines(record)
    if len(lines) < 3:
        raise FormatError("orbit matrix record needs a header and two size lines")
    head = _ints(lines[0], "orbit matrix header")
    if len(head) != 4:
        raise FormatError("orbit matrix header must be 'v k lambda n'")
    v, k, lam, n = head
    big = _ints(lines[1], "block orbit sizes")
    small = _ints(lines[2], "point orbit sizes")
    rows = [_ints(x, "orbit matrix row") for x in lines[3:]]
    if len(rows) != len(big):
        raise FormatError(f"expected {len(big)} rows, found {len(rows)}")
    return OrbitMatrix(n, DesignParams(v, k, lam), tuple(big), tuple(small), rows)


def load_orbit_matrices(text: str) -> list[OrbitMatrix]:
    return [_parse_orbit_matrix(r) for r in _records(text)]


def load_orbit_matrix(text: str) -> OrbitMatrix:
    oms = load_orbit_matrices(text)
    if len(oms) != 1:
        raise FormatError(f"expected one orbit matrix, found {len(oms)}")
    return oms[0]


# ---------------------------------------------------------------------------
# designs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DesignRecord:
    design: IncidenceStructure
    params: DesignParams
    provenance: str | None = None  # e.g. "# source OM1 choice 0 1 ..."


def dump_design(design: IncidenceStructure, params: DesignParams, provenance: str | None = None) -> str:
    lines = [f"{params.v} {params.k} {params.lam}"]
    if provenance:
        lines.append(provenance if provenance.startswith("#") else "# " + provenance)
    lines += ["".join("1" if x else "0" for x in row) for row in design.matrix]
    return "\n".join(lines) + "\n"


def _parse_design(record: list[str]) -> DesignRecord:
    head = _ints(record[0], "design header")
    if len(head) != 3:
        raise FormatError("design header must be 'v k lambda'")
    params = DesignParams(*head)
    prov = next((x for x in record[1:] if x.startswith("#")), None)
    rows = _data_lines(record[1:])
    if any(set(r) - {"0", "1"} for r in rows):
        raise FormatError("design rows must be 0-1 strings")
    if any(len(r) != params.v for r in rows):
        raise FormatError(f"design rows must have length v={params.v}")
    m = np.array([[c == "1" for c in r] for r in rows], dtype=np.uint8).reshape(len(rows), params.v)
    return DesignRecord(IncidenceStructure(m), params, prov)


def load_designs(text: str) -> list[DesignRecord]:
    return [_parse_design(r) for r in _records(text)]


# ---------------------------------------------------------------------------
# codes
# ---------------------------------------------------------------------------


def dump_code(code: TernaryCode) -> str:
    g = code.generator.to_array()
    lines = [f"{code.n} {code.k}"] + ["".join(str(int(x)) for x in row) for row in g]
    return "\n".join(lines) + "\n"


def _parse_code(record: list[str]) -> TernaryCode:
    lines = _data_lines(record)
    head = _ints(lines[0], "code header")
    if len(head) != 2:
        raise FormatError("code header must be 'n k'")
    n, k = head
    rows = lines[1:]
    if len(rows) != k or any(len(r) != n or set(r) - set("012") for r in rows):
        raise FormatError(f"code needs {k} rows of length {n} over 0,1,2")
    g = np.array([[int(c) for c in r] for r in rows], dtype=np.uint8).reshape(k, n)
    code = TernaryCode.from_generator(TritMatrix.from_array(g))
    if code.k != k:
        raise FormatError(f"generator rows are dependent (rank {code.k} < {k})")
    return code


def load_codes(text: str) -> list[TernaryCode]:
    return [_parse_code(r) for r in _records(text)]


def load_code(text: str) -> TernaryCode:
    codes = load_codes(text)
    if len(codes) != 1:
        raise FormatError(f"expected one code, found {len(codes)}")
    return codes[0]


# ---------------------------------------------------------------------------
# weight reports
# ---------------------------------------------------------------------------


def dump_report(report: WeightReport) -> str:
    return report.to_text()


def load_reports(text: str) -> list[WeightReport]:
    return [WeightReport.from_text("\n".join(_data_lines(r))) for r in _records(text)]
