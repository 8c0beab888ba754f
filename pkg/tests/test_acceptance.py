"""Acceptance suite: one test per criterion, one printed pass/fail line each.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
lines; the heavyweight benchmark rows are computed once and shared.
"""

import random

import mpmath as mp
import pytest

from intrel import Workspace, compute_hyperplane, ipslq, make_context, pslq
from intrel.cli import BenchCase, run_bench_case
from intrel.core import _drive
from intrel.minpoly import relation_to_polynomial
from intrel.oracle import brute_force_relation, exact_minpoly_radical_sum, plant_relation
from test_core import check_workspace_invariants

TABLE_ROWS = [
    (2, 2, 5, 10),
    (2, 3, 7, 36),
    (3, 3, 10, 125),
    (3, 4, 13, 540),
    (2, 7, 15, 5103),
]


def _report(num, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {num}: {detail}")
    assert ok, f"criterion {num}: {detail}"


@pytest.fixture(scope="module")
def bench_rows():
    rows = []
    for i, (s, t, d, M) in enumerate(TABLE_ROWS, start=1):
        row = run_bench_case(BenchCase(s, t, d, M, 500))
        row.no = i
        rows.append(row)
    return rows


@pytest.fixture(scope="module")
def random_bound_instances():
    """Criterion 3 instance set, reused by criterion 7."""
    ctx = make_context(50)
    instances = []
    for i in range(200):
        rng = random.Random(31337 + i)
        n = rng.randint(2, 5)
        M = rng.randint(2, 25)
        with ctx.workprec():
            x = [1 + mp.mpf(rng.random()) for _ in range(n)]
        instances.append((x, M, ctx))
    return instances


def test_criterion_1_table_rows_exact(bench_rows):
    bad = []
    for row, (s, t, d, M) in zip(bench_rows, TABLE_ROWS):
        truth = exact_minpoly_radical_sum(s, t)
        ok = (
            row.match_oracle
            and row.polynomial == truth
            and row.polynomial.degree == d - 1
            and row.polynomial.height == M
        )
        if not ok:
            bad.append((s, t))
    _report(
        1,
        not bad,
        f"rows 1-5 at 500 digits, bounds (d, M+1): exact oracle match"
        + (f"; failing {bad}" if bad else ""),
    )


def test_criterion_2_incremental_speedup(bench_rows):
    row3 = bench_rows[2]
    iter_ratio = row3.iter_pslq / row3.iter_ipslq
    wall_ratio = row3.ratio
    ok = iter_ratio >= 2.0 and wall_ratio is not None and wall_ratio >= 2.0
    _report(
        2,
        ok,
        f"row 3 (s=t=3, d=10): iteration ratio {iter_ratio:.2f} >= 2, "
        f"wall-clock ratio {wall_ratio} >= 2 (measured, not asserted beyond the floor)",
    )


def test_criterion_3_bound_soundness(random_bound_instances):
    counterexamples = 0
    bounds = 0
    for x, M, ctx in random_bound_instances:
        out = ipslq(x, M, ctx)
        if out.kind == "bound":
            bounds += 1
            with ctx.workprec():
                witness = brute_force_relation(x, M, ctx.eps_residual)
            if witness is not None:
                counterexamples += 1
    _report(
        3,
        counterexamples == 0,
        f"200 seeded instances (n<=5, M<=25, 50 digits): {bounds} bound outcomes, "
        f"{counterexamples} refuted by exhaustive search",
    )


def test_criterion_4_planted_recovery():
    ctx = make_context(50)
    failures = 0
    for i in range(100):
        rng = random.Random(777 + i)
        n = rng.randint(2, 5)
        cb = rng.randint(1, 10)
        inst = plant_relation(873000 + i, n, cb, ctx)
        with ctx.workprec():
            M = mp.sqrt(mp.fsum(mp.mpf(v) * v for v in inst.m))
            out = ipslq(inst.x, M, ctx)
            if out.kind != "relation":
                failures += 1
                continue
            m = out.relation
            resid = abs(mp.fdot(inst.x, m))
            mnorm = mp.sqrt(mp.fsum(mp.mpf(v) * v for v in m))
            xnorm = mp.sqrt(mp.fsum(v * v for v in inst.x))
            gamma_slack = mp.sqrt(2) ** (n - 2)
            if resid > ctx.eps_residual * mnorm * xnorm or mnorm > gamma_slack * M:
                failures += 1
    _report(
        4,
        failures == 0,
        f"100 seeded planted instances (n<=5, coeffs<=10, M=||m||): {failures} failures",
    )


def test_criterion_5_invariant_suite():
    ctx = make_context(50)
    checked = [0]

    def hook(ws):
        check_workspace_invariants(ws)
        checked[0] += 1

    for i in range(20):
        rng = random.Random(5150 + i)
        n = rng.randint(2, 6)
        with ctx.workprec():
            if i % 2 == 0:
                inst = plant_relation(661000 + i, n, 8, ctx)
                x = inst.x
                M = mp.sqrt(mp.fsum(mp.mpf(v) * v for v in inst.m))
            else:
                x = [1 + mp.mpf(rng.random()) for _ in range(n)]
                M = mp.mpf(rng.randint(3, 15))
            ws = Workspace(x, M, ctx, k=1 if i % 4 < 2 else n - 1)
            check_workspace_invariants(ws)
            _drive(ws, on_iteration=hook)
    _report(
        5,
        True,
        f"20 random runs (n<=6): A*B=I exact, trapezoidal, size-reduce bound, "
        f"row Gram within n*2^-p/2 on {checked[0]} iterations (violations raise)",
    )


def test_criterion_6_suffix_block():
    ctx = make_context(50)
    worst = mp.mpf(0)
    with ctx.workprec():
        tol = mp.mpf(2) ** (-ctx.precision_bits + 8)
        for i in range(50):
            rng = random.Random(424200 + i)
            n = rng.randint(3, 8)
            x = [1 + mp.mpf(rng.random()) for _ in range(n)]
            H = compute_hyperplane(x)
            for k in range(1, n - 1):
                sub = compute_hyperplane(x[k:])
                for a in range(n - k):
                    for b in range(n - k - 1):
                        worst = max(worst, abs(H[k + a][k + b] - sub[a][b]))
        ok = worst < tol
    _report(
        6,
        ok,
        f"50 random vectors (n<=8): suffix block max deviation {mp.nstr(worst, 3)} "
        f"< 2^-(p-8) = {mp.nstr(tol, 3)}",
    )


def test_criterion_7_outcome_agreement(random_bound_instances):
    disagreements = 0
    for x, M, ctx in random_bound_instances:
        a = ipslq(x, M, ctx)
        b = pslq(x, M, ctx)
        if a.kind != b.kind:
            disagreements += 1
    _report(
        7,
        disagreements == 0,
        f"criterion-3 instance set: {disagreements} outcome-kind disagreements "
        f"between classic and incremental",
    )
