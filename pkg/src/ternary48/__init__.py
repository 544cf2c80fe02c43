"""Ternary self-dual [48,24] codes from symmetric 2-(47,23,11) designs with a C6 action."""

from __future__ import annotations

__version__ = "0.1.0"

from .codes import TernaryCode, code_from_design
from .designs import DesignParams, IncidenceStructure, ParameterError
from .gf3 import TritMatrix
from .orbit_matrix import OrbitMatrix, load_appendix, validate_orbit_matrix
from .weights import WeightReport, classify, count_weight, min_weight

__all__ = [
    "__version__",
    "DesignParams",
    "IncidenceStructure",
    "OrbitMatrix",
    "ParameterError",
    "TernaryCode",
    "TritMatrix",
    "WeightReport",
    "classify",
    "code_from_design",
    "count_weight",
    "load_appendix",
    "min_weight",
    "validate_orbit_matrix",
]
