"""Command line surface: one-shot relation finding, minimal polynomial
reconstruction, and the benchmark harness comparing the incremental search
against the traditional degree-by-degree PSLQ search.

Exit codes: 0 = relation/polynomial found, 2 = bound certified, 1 = error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass

import mpmath as mp

from .arith import make_context, parse_decimal
from .core import PrecisionExhaustedError, pslq
from .incremental import ipslq
from .minpoly import (
    MinPolyRequest,
    minpoly,
    powers_vector,
    relation_to_polynomial,
    residual_check,
)
from .oracle import exact_minpoly_radical_sum

__all__ = ["main", "BenchCase", "BenchRow", "run_bench_case", "DEFAULT_CASES"]

REPORT_COLUMNS = [
    "no",
    "s",
    "t",
    "d",
    "M",
    "t_ipslq_s",
    "t_pslq_s",
    "ratio",
    "iter_ipslq",
    "iter_pslq",
    "match_oracle",
]

# first five rows of the built-in 3^(1/s)+2^(1/t) family: (s, t, degree bound d,
# height M); the exact minimal polynomial has degree d-1 and height M, and the
# harness passes bounds (d, M+1) to both arms
DEFAULT_CASES = [
    (2, 2, 5, 10),
    (2, 3, 7, 36),
    (3, 3, 10, 125),
    (3, 4, 13, 540),
    (2, 7, 15, 5103),
]


@dataclass(frozen=True)
class BenchCase:
    """One benchmark row: family parameters, bounds, and decimal precision."""

    s: int
    t: int
    d: int
    M: int
    digits: int

    def __post_init__(self):
        if min(self.s, self.t, self.d, self.M, self.digits) < 1:
            raise ValueError("bench case fields must be positive")


@dataclass
class BenchRow:
    """Measured result of one case; times are None in iterations-only mode."""

    no: int
    case: BenchCase
    polynomial: object
    t_ipslq_s: float | None
    t_pslq_s: float | None
    ratio: float | None
    iter_ipslq: int
    iter_pslq: int
    match_oracle: bool

    def report_dict(self) -> dict:
        c = self.case
        return {
            "no": self.no,
            "s": c.s,
            "t": c.t,
            "d": c.d,
            "M": c.M,
            "t_ipslq_s": self.t_ipslq_s,
            "t_pslq_s": self.t_pslq_s,
            "ratio": self.ratio,
            "iter_ipslq": self.iter_ipslq,
            "iter_pslq": self.iter_pslq,
            "match_oracle": self.match_oracle,
        }


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; 2 is reserved for bound
    # certificates here, so route usage errors through the normal error path
    def error(self, message):
        raise CliError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="intrel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_rel = sub.add_parser("relation", help="find an integer relation for a vector")
    p_rel.add_argument("--input", required=True, help="comma-separated decimal numbers")
    p_rel.add_argument("--norm-bound", required=True, help="relation 2-norm bound M")
    p_rel.add_argument("--digits", type=int, default=50, help="working decimal digits")
    p_rel.add_argument("--gamma", default=None, help="pivot parameter (> 2/sqrt(3))")
    p_rel.add_argument("--json", action="store_true", help="machine-readable output")
    p_rel.set_defaults(func=cmd_relation)

    p_mp = sub.add_parser("minpoly", help="reconstruct a minimal polynomial")
    p_mp.add_argument("--alpha", required=True, help="decimal approximation")
    p_mp.add_argument("--degree-bound", type=int, required=True)
    p_mp.add_argument("--height-bound", type=int, required=True)
    p_mp.add_argument("--digits", type=int, default=50, help="working decimal digits")
    p_mp.add_argument("--gamma", default=None, help="pivot parameter (> 2/sqrt(3))")
    p_mp.add_argument(
        "--strict-norm",
        action="store_true",
        help="widen the norm bound so a bound outcome covers all heights <= bound",
    )
    p_mp.add_argument("--json", action="store_true", help="machine-readable output")
    p_mp.set_defaults(func=cmd_minpoly)

    p_b = sub.add_parser("bench", help="compare incremental vs. classic search")
    p_b.add_argument("--cases", default=None, help="CSV case file with header s,t,d,M,digits")
    p_b.add_argument("--digits-default", type=int, default=500)
    p_b.add_argument(
        "--iterations-only",
        action="store_true",
        help="deterministic report: iteration counts, no wall times",
    )
    p_b.add_argument("--out", default=None, help="write the report to this path")
    p_b.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p_b.add_argument("--gamma", default=None, help="pivot parameter (> 2/sqrt(3))")
    p_b.set_defaults(func=cmd_bench)
    return parser


def _parse_gamma(arg, ctx):
    return None if arg is None else parse_decimal(arg, ctx)


def cmd_relation(args) -> int:
    ctx = make_context(args.digits)
    tokens = [tok.strip() for tok in args.input.split(",")]
    xs = [parse_decimal(tok, ctx) for tok in tokens]
    bound = parse_decimal(args.norm_bound, ctx)
    outcome = ipslq(xs, bound, ctx, gamma=_parse_gamma(args.gamma, ctx))
    stages = [
        {"k": r.k, "swaps": r.swaps, "outcome": r.outcome} for r in outcome.trace.records
    ]
    if args.json:
        payload = {
            "outcome": outcome.kind,
            "relation": outcome.relation,
            "bound": None if outcome.bound is None else float(outcome.bound),
            "iterations": outcome.iterations,
            "stages": stages,
        }
        print(json.dumps(payload, indent=2))
    elif outcome.kind == "relation":
        print("relation: " + ",".join(str(v) for v in outcome.relation))
        print(f"iterations: {outcome.iterations}")
    else:
        print(f"no relation: certified 2-norm > {mp.nstr(outcome.bound, 12)}")
        print(f"iterations: {outcome.iterations}")
    return 0 if outcome.kind == "relation" else 2


def cmd_minpoly(args) -> int:
    ctx = make_context(args.digits)
    alpha = parse_decimal(args.alpha, ctx)
    req = MinPolyRequest(alpha, args.degree_bound, args.height_bound, ctx)
    t0 = time.perf_counter()
    result = minpoly(req, gamma=_parse_gamma(args.gamma, ctx), strict_norm=args.strict_norm)
    elapsed = time.perf_counter() - t0
    if args.json:
        payload = {
            "outcome": result.kind,
            "coefficients": None if result.polynomial is None else list(result.polynomial.coeffs),
            "polynomial": None if result.polynomial is None else str(result.polynomial),
            "degree": None if result.polynomial is None else result.polynomial.degree,
            "height": None if result.polynomial is None else result.polynomial.height,
            "stage_degree": result.stage_degree,
            "residual": None if result.residual is None else mp.nstr(result.residual, 8),
            "iterations": result.iterations,
            "time_s": round(elapsed, 6),
        }
        print(json.dumps(payload, indent=2))
    elif result.kind == "polynomial":
        p = result.polynomial
        print(f"polynomial: {p}")
        print(f"coefficients: {p.coeff_csv()}")
        print(f"degree: {p.degree}")
        print(f"height: {p.height}")
        print(f"stage: k={result.found_stage} (candidate degree {result.stage_degree})")
        print(f"residual: {mp.nstr(result.residual, 8)}")
        print(f"iterations: {result.iterations}")
        print(f"time_s: {elapsed:.3f}")
    else:
        if result.bound is not None:
            print(
                "no polynomial: certified that no integer polynomial with degree <= "
                f"{args.degree_bound} and height <= {args.height_bound} "
                "annihilates the input at this precision"
            )
        else:
            print(
                "no polynomial: the search only reached annihilators above the "
                f"height bound {args.height_bound} (no certificate)"
            )
        print(f"iterations: {result.iterations}")
    return 0 if result.kind == "polynomial" else 2


def run_bench_case(case: BenchCase, gamma=None, iterations_only: bool = False) -> "BenchRow":
    """Run both harness arms on one case and compare against the exact oracle.

    Arm one reconstructs via the incremental search with bounds (d, M+1).
    Arm two is the traditional search: fresh classic PSLQ runs on powers
    vectors of lengths 3, 4, ... until a relation appears or d+1 is
    exhausted.  Both arms share every subroutine except the window logic,
    and both map the height bound to the relation 2-norm bound the strict
    way, (M+1)*sqrt(d+1): a conforming polynomial's coefficient 2-norm
    can reach height*sqrt(d+1), and with the direct mapping the search
    would certify "no relation" at stages that do carry the (tall)
    minimal polynomial of this family.
    """
    ctx = make_context(case.digits)
    with ctx.workprec():
        alpha = mp.root(3, case.s) + mp.root(2, case.t)
        norm_bound = mp.mpf(case.M + 1) * mp.sqrt(case.d + 1)

    t0 = time.perf_counter()
    req = MinPolyRequest(alpha, case.d, case.M + 1, ctx)
    res_inc = minpoly(req, gamma=gamma, strict_norm=True)
    t_inc = time.perf_counter() - t0

    t0 = time.perf_counter()
    iter_classic = 0
    poly_classic = None
    for length in range(3, case.d + 2):
        xs = powers_vector(alpha, length, ctx)
        out = pslq(xs, norm_bound, ctx, gamma=gamma)
        iter_classic += out.iterations
        if out.kind == "relation":
            candidate = relation_to_polynomial(out.relation)
            accepted, _ = residual_check(candidate, alpha, ctx)
            if accepted and candidate.height <= case.M + 1:
                poly_classic = candidate
                break
    t_classic = time.perf_counter() - t0

    truth = exact_minpoly_radical_sum(case.s, case.t)
    match = res_inc.polynomial == truth and poly_classic == truth
    if iterations_only:
        t_i = t_p = ratio = None
    else:
        t_i, t_p = round(t_inc, 4), round(t_classic, 4)
        ratio = round(t_classic / t_inc, 2) if t_inc > 0 else None
    return BenchRow(
        no=0,
        case=case,
        polynomial=res_inc.polynomial,
        t_ipslq_s=t_i,
        t_pslq_s=t_p,
        ratio=ratio,
        iter_ipslq=res_inc.iterations,
        iter_pslq=iter_classic,
        match_oracle=match,
    )


def _load_cases(path: str | None, digits_default: int) -> list[BenchCase]:
    if path is None:
        return [BenchCase(s, t, d, M, digits_default) for s, t, d, M in DEFAULT_CASES]
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            rows = list(reader)
    except OSError as exc:
        raise CliError(f"cannot read case file {path}: {exc}") from exc
    if not rows:
        raise CliError(f"case file {path} has no rows")
    cases = []
    for row in rows:
        try:
            digits = row.get("digits") or ""
            cases.append(
                BenchCase(
                    s=int(row["s"]),
                    t=int(row["t"]),
                    d=int(row["d"]),
                    M=int(row["M"]),
                    digits=int(digits) if digits.strip() else digits_default,
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(f"malformed case row {row!r}: {exc}") from exc
    return cases


def render_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_COLUMNS)
    for row in rows:
        d = row.report_dict()
        writer.writerow(
            ["" if d[c] is None else (str(d[c]).lower() if c == "match_oracle" else d[c]) for c in REPORT_COLUMNS]
        )
    return buf.getvalue()


def render_json(rows: list[BenchRow]) -> str:
    return json.dumps([row.report_dict() for row in rows], indent=2) + "\n"


def cmd_bench(args) -> int:
    cases = _load_cases(args.cases, args.digits_default)
    ctx_gamma = make_context(max(c.digits for c in cases))
    gamma = _parse_gamma(args.gamma, ctx_gamma)
    rows = []
    for i, case in enumerate(cases, start=1):
        row = run_bench_case(case, gamma=gamma, iterations_only=args.iterations_only)
        row.no = i
        rows.append(row)
    report = render_json(rows) if args.json else render_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report)
    else:
        sys.stdout.write(report)
    failures = [row for row in rows if not row.match_oracle]
    for row in failures:
        c = row.case
        print(
            f"error: case no={row.no} (s={c.s}, t={c.t}) does not match the exact oracle",
            file=sys.stderr,
        )
    return 1 if failures else 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, PrecisionExhaustedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
