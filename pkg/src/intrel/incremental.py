"""Incremental PSLQ: run the window loop on a growing suffix of the input.

The search starts with the two-entry suffix window ``{n-1}`` and, each
time the window is exhausted (no relation of 2-norm <= M among the suffix
entries), extends one position to the left while keeping H, A, B and all
accumulated reduction state.  For inputs ordered from most to least
significant (e.g. descending powers of a number), this explores candidate
sub-vectors smallest-first and reuses every iteration already spent.
"""

from __future__ import annotations

from .arith import PrecisionContext
from .core import (
    RelationOutcome,
    StageRecord,
    StageTrace,
    Workspace,
    _drive,
)

__all__ = ["StageRecord", "StageTrace", "extend_window", "ipslq"]


def extend_window(ws: Workspace) -> None:
    """Grow the window one position leftward, reusing all state.

    Only valid after the current window reported exhaustion and while
    k > 1; H, A, B and x are untouched, only the start index moves.
    """
    if ws.k <= 1:
        raise ValueError("window already spans the full vector; cannot extend")
    ws.k -= 1


def ipslq(x, M, ctx: PrecisionContext, gamma=None, on_iteration=None) -> RelationOutcome:
    """Incremental PSLQ over ``x``: relation or bound certificate, with stage trace.

    Identical to :func:`intrel.core.pslq` except the pivot window starts
    at the rightmost pair and is extended leftward on exhaustion; a bound
    is only returned once the window spans the whole vector.  The outcome
    trace records one entry per stage.
    """
    ws = Workspace(x, M, ctx, gamma=gamma, k=len(x) - 1)
    return _drive(ws, on_iteration=on_iteration)
