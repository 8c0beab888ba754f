"""Integer relation detection and minimal polynomial reconstruction.

Public surface: precision contexts (:func:`make_context`), the classic
full-window relation search (:func:`pslq`), the incremental suffix-window
search (:func:`ipslq`), and minimal polynomial reconstruction
(:func:`minpoly`).  Test oracles live in :mod:`intrel.oracle`; the CLI in
:mod:`intrel.cli`.
"""

from .arith import PrecisionContext, format_real, make_context, nearest_int, parse_decimal
from .core import (
    PrecisionExhaustedError,
    RelationOutcome,
    StageRecord,
    StageTrace,
    Workspace,
    compute_hyperplane,
    extract_relation,
    pslq,
    relation_detected,
    select_pivot,
    size_reduce,
    swap_and_restore,
    termination_scan,
)
from .incremental import extend_window, ipslq
from .minpoly import (
    IntPolynomial,
    MinPolyRequest,
    MinPolyResult,
    minpoly,
    powers_vector,
    relation_to_polynomial,
    residual_check,
)

__all__ = [
    "PrecisionContext",
    "make_context",
    "parse_decimal",
    "format_real",
    "nearest_int",
    "PrecisionExhaustedError",
    "RelationOutcome",
    "StageRecord",
    "StageTrace",
    "Workspace",
    "compute_hyperplane",
    "size_reduce",
    "select_pivot",
    "swap_and_restore",
    "termination_scan",
    "relation_detected",
    "extract_relation",
    "pslq",
    "extend_window",
    "ipslq",
    "IntPolynomial",
    "MinPolyRequest",
    "MinPolyResult",
    "powers_vector",
    "relation_to_polynomial",
    "residual_check",
    "minpoly",
]

__version__ = "0.1.0"
