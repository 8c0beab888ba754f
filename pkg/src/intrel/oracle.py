"""Independent ground truth for tests: exhaustive search, exact minimal
polynomials of the radical-sum benchmark family, and planted instances.

Nothing here shares code with the reduction loop: the exhaustive search
enumerates lattice vectors directly (float64 prescreen, exact rational
confirmation), and the benchmark polynomials come from an exact resultant
over the integers.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp
import numpy as np
import sympy

from .arith import PrecisionContext, make_context
from .minpoly import IntPolynomial

__all__ = [
    "PlantedInstance",
    "brute_force_relation",
    "exact_minpoly_radical_sum",
    "plant_relation",
]

_MAX_DIM = 6
_MAX_NORM = 1000


@dataclass
class PlantedInstance:
    """A vector with a known integer relation baked in."""

    x: list
    m: list[int]
    seed: int


def _to_fraction(v) -> Fraction:
    """Exact rational value of an mpf/int/float (mpf mantissa * 2^exp)."""
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    sign, man, exp, _ = mp.mpf(v)._mpf_
    if man == 0:
        if exp != 0:
            raise ValueError("non-finite value has no rational form")
        return Fraction(0)
    fr = Fraction(man) * Fraction(2) ** exp
    return -fr if sign else fr


def _prefixes(xf: np.ndarray, rad2: float):
    """All int vectors over the first len(xf) coords with squared norm <= rad2."""
    r0 = int(math.floor(math.sqrt(rad2)))
    col = np.arange(-r0, r0 + 1, dtype=np.int64)
    P = col.reshape(-1, 1)
    ssq = (col * col).astype(np.float64)
    for _ in range(len(xf) - 1):
        rem = np.maximum(rad2 - ssq, 0.0)
        r = np.floor(np.sqrt(rem)).astype(np.int64)
        counts = 2 * r + 1
        total = int(counts.sum())
        rows = np.repeat(np.arange(len(P)), counts)
        starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
        offs = np.arange(total) - np.repeat(starts, counts)
        vals = offs - np.repeat(r, counts)
        P = np.concatenate([P[rows], vals.reshape(-1, 1)], axis=1)
        ssq = ssq[rows] + (vals * vals).astype(np.float64)
    return P, ssq


def brute_force_relation(x, M, tol):
    """Exhaustively search for an integer relation of 2-norm <= M.

    Enumerates every nonzero integer vector up to sign, picks the one
    minimizing |m . x| (ties: smaller 2-norm, then lexicographic), and
    returns it iff |m . x| <= tol * ||m||_2 * ||x||_2, else None.  The
    final comparison is exact rational arithmetic on the stored binary
    values of x, so the oracle itself has no rounding error; a float64
    prescreen merely limits how many vectors reach the exact stage.

    Desk-scale by design: refuses n > 6 or M > 1000.
    """
    n = len(x)
    if n < 2:
        raise ValueError("need at least 2 entries")
    if n > _MAX_DIM:
        raise ValueError(f"enumeration limited to n <= {_MAX_DIM}")
    Mf = float(M)
    if not 0 < Mf <= _MAX_NORM:
        raise ValueError(f"enumeration limited to 0 < M <= {_MAX_NORM}")
    tol_f = float(tol)
    if not tol_f > 0:
        raise ValueError("tol must be positive")

    xf = np.array([float(v) for v in x], dtype=np.float64)
    xnorm_f = float(np.linalg.norm(xf))
    rad2 = Mf * Mf + 0.5  # inflated; exact filter below trims the boundary

    P, ssq = _prefixes(xf[:-1], rad2)
    nz = ssq > 0
    P, ssq = P[nz], ssq[nz]
    pd = P @ xf[:-1]
    rem = np.maximum(rad2 - ssq, 0.0)
    rn = np.floor(np.sqrt(rem)).astype(np.int64)
    if xf[-1] != 0.0:
        opt = np.rint(-pd / xf[-1]).astype(np.int64)
    else:
        opt = np.zeros(len(P), dtype=np.int64)
    last = np.clip(opt, -rn, rn)
    resid = np.abs(pd + last * xf[-1])
    mnorm = np.sqrt(ssq + (last * last).astype(np.float64))
    # prescreen threshold: generous superset of the exact acceptance region
    rel = max(2.0 * tol_f, 1e-9)
    keep = resid <= rel * mnorm * xnorm_f + 1e-12
    cand = {tuple(int(v) for v in row) + (int(l),) for row, l in zip(P[keep], last[keep])}
    cand.add((0,) * (n - 1) + (1,))  # the lone all-zero-prefix vector

    xq = [_to_fraction(v) for v in x]
    xq_ssq = sum(q * q for q in xq)
    tol_q = _to_fraction(tol)
    m2_cap = _to_fraction(M) ** 2

    best = None
    for m in cand:
        nsq = sum(v * v for v in m)
        if nsq == 0 or nsq > m2_cap:
            continue
        first = next(v for v in m if v != 0)
        if first < 0:
            m = tuple(-v for v in m)
        r = abs(sum(v * q for v, q in zip(m, xq)))
        key = (r, nsq, m)
        if best is None or key < best:
            best = key
    if best is None:
        return None
    r, nsq, m = best
    if r * r <= tol_q * tol_q * nsq * xq_ssq:
        return list(m)
    return None


@lru_cache(maxsize=None)
def exact_minpoly_radical_sum(s: int, t: int) -> IntPolynomial:
    """Exact minimal polynomial of 3^(1/s) + 2^(1/t), 1 <= s, t <= 7.

    Computed over exact integers as the resultant of z^s - 3 and
    (y - z)^t - 2 in z, then square-free reduced and normalized; no
    floating point touches the result.
    """
    if not (1 <= s <= 7 and 1 <= t <= 7):
        raise ValueError("family supported for 1 <= s, t <= 7 only")
    y, z = sympy.symbols("y z")
    res = sympy.resultant(z**s - 3, (y - z) ** t - 2, z)
    p = sympy.Poly(res, y)
    g = p.gcd(p.diff(y))
    if g.degree() > 0:
        p = p.exquo(g)
    return IntPolynomial.from_coeffs([int(c) for c in p.all_coeffs()])


def plant_relation(
    seed: int, n: int, coeff_bound: int, ctx: PrecisionContext | None = None
) -> PlantedInstance:
    """Deterministically generate a vector with a planted integer relation.

    Draws m with entries in [-coeff_bound, coeff_bound] (last entry
    nonzero) and x_1..x_{n-1} uniform in [1, 2], then solves for x_n so
    that m . x = 0 up to one working-precision rounding.  Redraws whenever
    some x_i lands on zero.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be >= 1")
    if ctx is None:
        ctx = make_context(50)
    rng = random.Random(seed)
    with ctx.workprec():
        while True:
            m = [rng.randint(-coeff_bound, coeff_bound) for _ in range(n)]
            while m[-1] == 0:
                m[-1] = rng.randint(-coeff_bound, coeff_bound)
            xs = [mp.mpf(1) + mp.mpf(rng.random()) for _ in range(n - 1)]
            acc = mp.fsum(c * v for c, v in zip(m[:-1], xs))
            xn = -acc / m[-1]
            xs.append(xn)
            if all(v != 0 for v in xs):
                return PlantedInstance(x=xs, m=m, seed=seed)
