"""Shared PSLQ machinery: hyperplane matrix, size reduction, pivoting, swaps.

A run owns a mutable :class:`Workspace` holding the real matrix ``H``
(lower trapezoidal, orthonormal columns initially) together with the pair
of exact unimodular integer matrices ``A`` and ``B`` that record the row
operations applied to ``H``.  ``A @ B == I`` at all times, so when a
diagonal corner of ``H`` collapses to numeric zero, the last column of
``B`` is an integer relation candidate for the input vector.

The loop driver here is window-based: pivots are chosen among rows
``{k, ..., n-1}`` (1-based).  Classic PSLQ is the driver with ``k`` pinned
at 1; the incremental variant starts at ``k = n-1`` and decrements ``k``
on window exhaustion (see :mod:`intrel.incremental`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp

from .arith import PrecisionContext, nearest_int

__all__ = [
    "PrecisionExhaustedError",
    "StageRecord",
    "StageTrace",
    "RelationOutcome",
    "Workspace",
    "compute_hyperplane",
    "size_reduce",
    "select_pivot",
    "swap_and_restore",
    "termination_scan",
    "relation_detected",
    "extract_relation",
    "pslq",
]


class PrecisionExhaustedError(RuntimeError):
    """Raised when a run cannot be completed reliably at the working precision."""


@dataclass
class StageRecord:
    """One window stage: start index, swaps spent in it, and how it ended."""

    k: int
    swaps: int
    outcome: str  # "extended" | "relation" | "bound"


@dataclass
class StageTrace:
    """Per-stage records of a run plus the cumulative swap count."""

    records: list[StageRecord] = field(default_factory=list)
    total_swaps: int = 0


@dataclass
class RelationOutcome:
    """Result of a relation search: a relation vector or a norm-bound certificate.

    Exactly one of ``relation`` / ``bound`` is set.  A bound outcome
    certifies that the input admits no integer relation of 2-norm <= bound.
    ``iterations`` counts row swaps performed, the unit of work both
    algorithm variants share.
    """

    relation: list[int] | None
    bound: mp.mpf | None
    iterations: int
    trace: StageTrace

    @property
    def kind(self) -> str:
        return "relation" if self.relation is not None else "bound"


def compute_hyperplane(x, ctx: PrecisionContext | None = None):
    """Build the n x (n-1) lower-trapezoidal matrix orthogonal to ``x``.

    With tail norms s_j = sqrt(sum_{i>=j} x_i^2), the entries are
    H[j][j] = s_{j+1}/s_j and H[i][j] = -x_i*x_j/(s_j*s_{j+1}) for i > j,
    zero above the diagonal.  Columns are orthonormal and the entries are
    invariant under scaling of ``x``.

    Runs at the ambient mpmath precision unless ``ctx`` is given.
    """
    if ctx is not None:
        with ctx.workprec():
            return compute_hyperplane(x)
    n = len(x)
    if n < 2:
        raise ValueError("need at least 2 entries")
    if any(v == 0 for v in x):
        raise ValueError("all entries must be nonzero")
    zero = mp.mpf(0)
    tail = [zero] * (n + 1)
    for i in range(n - 1, -1, -1):
        tail[i] = tail[i + 1] + x[i] * x[i]
    s = [mp.sqrt(t) for t in tail[:n]]
    H = [[zero] * (n - 1) for _ in range(n)]
    for j in range(n - 1):
        H[j][j] = s[j + 1] / s[j]
        denom = s[j] * s[j + 1]
        for i in range(j + 1, n):
            H[i][j] = -x[i] * x[j] / denom
    return H


class Workspace:
    """Mutable state of one relation search.

    ``x`` is the original input; ``x_unit`` the unit-normalized copy used
    to build ``H`` (relations are scale invariant; the original is kept
    for residual checks).  ``k`` is the 1-based window start.
    Construction performs the initial size reduction.
    """

    def __init__(self, x, M, ctx: PrecisionContext, gamma=None, k: int = 1):
        n = len(x)
        if n < 2:
            raise ValueError("need at least 2 input entries")
        self.n = n
        self.ctx = ctx
        with ctx.workprec():
            xs = [mp.mpf(v) for v in x]
            if any(v == 0 for v in xs):
                raise ValueError("all input entries must be nonzero")
            self.M = mp.mpf(M)
            if not self.M > 0:
                raise ValueError("norm bound M must be positive")
            self.gamma = mp.sqrt(2) if gamma is None else mp.mpf(gamma)
            if not self.gamma > 2 / mp.sqrt(3):
                raise ValueError("gamma must exceed 2/sqrt(3)")
            if not 1 <= k <= n - 1:
                raise ValueError("window start k out of range")
            self.x = xs
            norm = mp.sqrt(mp.fsum(v * v for v in xs))
            self.x_unit = [v / norm for v in xs]
            self.H = compute_hyperplane(self.x_unit)
            self.h_initial = [row[:] for row in self.H]
            self.A = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
            self.B = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
            self.k = k
            self.swap_count = 0
            # pivot weights gamma^j, 1-based j
            self._gamma_pow = [None] * n
            g = mp.mpf(1)
            for j in range(1, n):
                g = g * self.gamma
                self._gamma_pow[j] = g
            size_reduce(self)

    def window(self) -> range:
        """0-based diagonal indices of the active window."""
        return range(self.k - 1, self.n - 1)


def size_reduce(ws: Workspace) -> None:
    """Hermite-reduce H in place, mirroring row ops into A and inverse ops into B.

    Rows are processed top to bottom, columns right to left within each
    row, so after the pass |h_ij| <= |h_jj|/2 holds for every subdiagonal
    entry whose diagonal is nonzero.  Steps with t == 0 are skipped.
    """
    with ws.ctx.workprec():
        n, H, A, B = ws.n, ws.H, ws.A, ws.B
        for i in range(1, n):
            Hi, Ai = H[i], A[i]
            for j in range(min(i - 1, n - 2), -1, -1):
                hjj = H[j][j]
                if hjj == 0:
                    continue
                hij = Hi[j]
                if abs(hij + hij) < abs(hjj):  # |ratio| < 1/2 => t = 0
                    continue
                t = nearest_int(hij / hjj)
                if t == 0:
                    continue
                Hj, Aj = H[j], A[j]
                tm = mp.mpf(t)
                for c in range(j + 1):
                    Hi[c] -= tm * Hj[c]
                for c in range(n):
                    Ai[c] -= t * Aj[c]
                for r in range(n):
                    B[r][j] += t * B[r][i]


def select_pivot(ws: Workspace) -> int:
    """Return 1-based r in the window maximizing gamma^j * |h_jj| (ties: smallest)."""
    with ws.ctx.workprec():
        H, gp = ws.H, ws._gamma_pow
        best_r = -1
        best_w = None
        for j in ws.window():
            w = gp[j + 1] * abs(H[j][j])
            if best_w is None or w > best_w:
                best_w = w
                best_r = j + 1
        return best_r


def swap_and_restore(ws: Workspace, r: int) -> None:
    """Swap rows r, r+1 (1-based) of H and A, columns of B; re-triangularize H.

    For r < n-1 a plane rotation mixes columns r and r+1 so H is lower
    trapezoidal again; the rotation is orthogonal, so row norms of H are
    preserved.  For r = n-1 the swap alone keeps the shape.
    """
    if not ws.k <= r <= ws.n - 1:
        raise ValueError(f"swap position r={r} outside window [{ws.k}, {ws.n - 1}]")
    with ws.ctx.workprec():
        n, H, A, B = ws.n, ws.H, ws.A, ws.B
        i = r - 1
        H[i], H[i + 1] = H[i + 1], H[i]
        A[i], A[i + 1] = A[i + 1], A[i]
        for row in B:
            row[i], row[i + 1] = row[i + 1], row[i]
        if r < n - 1:
            a, b = H[i][i], H[i][i + 1]
            d = mp.sqrt(a * a + b * b)
            c = a / d
            s = b / d
            H[i][i] = d
            H[i][i + 1] = mp.mpf(0)
            for ii in range(i + 1, n):
                t0, t1 = H[ii][i], H[ii][i + 1]
                H[ii][i] = c * t0 + s * t1
                H[ii][i + 1] = c * t1 - s * t0
        ws.swap_count += 1


def termination_scan(ws: Workspace) -> bool:
    """True iff every window diagonal satisfies |h_jj| < 1/M (window exhausted).

    Exhaustion certifies that the sub-vector spanned by the window admits
    no integer relation of 2-norm <= M: any relation m satisfies
    ||m||_2 >= 1/max_j |h_jj|.  The comparison uses a relative haircut of
    eps_residual on 1/M: when the minimal relation norm equals M exactly,
    the exact window max sits exactly at 1/M and a bare strict comparison
    on rounded values would fire or not depending on the final ulp.  The
    haircut absorbs that rounding (it far exceeds accumulated noise) and
    only strengthens the certificate a fired scan provides.
    """
    with ws.ctx.workprec():
        H = ws.H
        limit = (1 - ws.ctx.eps_residual) / ws.M
        return all(abs(H[j][j]) < limit for j in ws.window())


def relation_detected(ws: Workspace) -> bool:
    """True iff the trailing diagonal entry is numerically zero."""
    return abs(ws.H[ws.n - 2][ws.n - 2]) <= ws.ctx.eps_zero


def extract_relation(ws: Workspace) -> list[int]:
    """Read the relation from the last column of B and verify its residual.

    The candidate must be nonzero and satisfy
    |m . x| <= eps_residual * ||m||_2 * ||x||_2 against the original input;
    otherwise the run is a precision failure.
    """
    n = ws.n
    m = [ws.B[i][n - 1] for i in range(n)]
    with ws.ctx.workprec():
        if all(v == 0 for v in m):
            raise PrecisionExhaustedError(
                "extracted a zero vector; increase decimal_digits and retry"
            )
        residual = abs(mp.fdot(ws.x, m))
        mnorm = mp.sqrt(mp.fsum(mp.mpf(v) * v for v in m))
        xnorm = mp.sqrt(mp.fsum(v * v for v in ws.x))
        if residual > ws.ctx.eps_residual * mnorm * xnorm:
            raise PrecisionExhaustedError(
                "candidate relation fails the residual check; "
                "increase decimal_digits and retry"
            )
    return m


def _interior_zero(ws: Workspace) -> int | None:
    """0-based window diagonal index with |h_jj| <= eps_zero, excluding the corner."""
    eps = ws.ctx.eps_zero
    for j in range(ws.k - 1, ws.n - 2):
        if abs(ws.H[j][j]) <= eps:
            return j
    return None


def _try_extract(ws: Workspace) -> list[int] | None:
    """Verified detection: candidate from B's last column, or None.

    A collapsing corner diagonal signals that the last column of B has
    assembled into a relation, but how far it collapses depends on how
    much the B entries have grown: for a quasi-relation of an
    approximately-known vector the corner settles at (input residual) x
    (coefficient growth), which can stay many orders of magnitude above
    eps_zero.  So the trigger here is the much looser eps_residual scale,
    and the candidate is accepted only if its residual against the
    original input passes; a false trigger just lets the reduction
    continue.
    """
    if abs(ws.H[ws.n - 2][ws.n - 2]) > ws.ctx.eps_residual:
        return None
    n = ws.n
    m = [ws.B[i][n - 1] for i in range(n)]
    residual = abs(mp.fdot(ws.x, m))
    mnorm = mp.sqrt(mp.fsum(mp.mpf(v) * v for v in m))
    xnorm = mp.sqrt(mp.fsum(v * v for v in ws.x))
    if residual <= ws.ctx.eps_residual * mnorm * xnorm:
        return m
    return None


def _iteration_cap(ws: Workspace) -> int:
    with ws.ctx.workprec():
        return int(10 * ws.n**3 * max(mp.mpf(1), mp.log(ws.M * ws.n, 2)))


def _drive(ws: Workspace, on_iteration=None) -> RelationOutcome:
    """Run the window loop to a relation or a bound certificate.

    One iteration is pivot selection, a swap with L-factor restoration, a
    size reduction, and the termination scan.  Verified relation
    detection takes precedence over the scan: when the corner collapses
    in the same iteration the window max drops below 1/M, the relation is
    returned.  On exhaustion the window is extended leftward if possible,
    else the bound certificate is issued.  A diagonal zero strictly
    inside the window (a degeneracy: a sub-vector relation surfaced
    early) is driven to the corner by adjacent swaps and extracted there.
    """
    trace = StageTrace()
    run_start = ws.swap_count
    stage_start = ws.swap_count
    cap = _iteration_cap(ws)

    def _relation(m):
        trace.records.append(StageRecord(ws.k, ws.swap_count - stage_start, "relation"))
        trace.total_swaps = ws.swap_count
        return RelationOutcome(m, None, ws.swap_count, trace)

    with ws.ctx.workprec():
        m = _try_extract(ws)
        if m is not None:
            return _relation(m)
        while True:
            if ws.swap_count - run_start >= cap:
                raise PrecisionExhaustedError(
                    f"no decision after {ws.swap_count - run_start} swaps; "
                    "increase decimal_digits and retry"
                )
            j = _interior_zero(ws)
            if j is not None:
                for r in range(j + 1, ws.n - 1):
                    swap_and_restore(ws, r)
                m = _try_extract(ws)
                if m is not None:
                    return _relation(m)
                continue
            r = select_pivot(ws)
            swap_and_restore(ws, r)
            # detect between the swap and the reduction: only swaps and
            # rotations move the corner, and size reduction never writes
            # B's last column, so this is the earliest complete view of a
            # candidate; returning here also avoids reducing rows against
            # a collapsed corner (huge multipliers, needless coefficient
            # blowup in A and B)
            m = _try_extract(ws)
            if m is not None:
                return _relation(m)
            size_reduce(ws)
            if on_iteration is not None:
                on_iteration(ws)
            if termination_scan(ws):
                if ws.k > 1:
                    trace.records.append(
                        StageRecord(ws.k, ws.swap_count - stage_start, "extended")
                    )
                    stage_start = ws.swap_count
                    ws.k -= 1
                else:
                    trace.records.append(
                        StageRecord(ws.k, ws.swap_count - stage_start, "bound")
                    )
                    trace.total_swaps = ws.swap_count
                    return RelationOutcome(None, ws.M, ws.swap_count, trace)


def pslq(x, M, ctx: PrecisionContext, gamma=None, on_iteration=None) -> RelationOutcome:
    """Classic PSLQ: the window loop with the full window {1, ..., n-1}.

    Returns a relation for ``x`` or certifies that none of 2-norm <= M
    exists.  ``gamma`` defaults to sqrt(2) and must exceed 2/sqrt(3).
    """
    ws = Workspace(x, M, ctx, gamma=gamma, k=1)
    return _drive(ws, on_iteration=on_iteration)
