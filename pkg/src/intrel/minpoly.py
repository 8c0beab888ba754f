"""Minimal polynomial reconstruction from a decimal approximation.

Given an approximation of an algebraic number, a degree bound d and a
height bound, run the incremental relation search on the descending powers
(alpha^d, ..., alpha, 1).  Window stages correspond to candidate degrees
1, 2, ..., d in that order, so the first relation found has minimal degree
within the bounds.  The found relation maps directly to an integer
polynomial, which must then pass an evaluation residual check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import mpmath as mp

from .arith import PrecisionContext
from .core import PrecisionExhaustedError, StageTrace
from .incremental import ipslq

__all__ = [
    "IntPolynomial",
    "MinPolyRequest",
    "MinPolyResult",
    "powers_vector",
    "relation_to_polynomial",
    "residual_check",
    "minpoly",
]


@dataclass(frozen=True)
class IntPolynomial:
    """Primitive integer polynomial, coefficients in descending degree order.

    Canonical form: leading coefficient positive, gcd of coefficients 1.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("empty coefficient list")
        if self.coeffs[0] <= 0:
            raise ValueError("leading coefficient must be positive")
        if reduce(math.gcd, (abs(c) for c in self.coeffs)) != 1:
            raise ValueError("coefficients must have content 1")

    @classmethod
    def from_coeffs(cls, coeffs) -> "IntPolynomial":
        """Normalize arbitrary integer coefficients into canonical form."""
        cs = [int(c) for c in coeffs]
        while cs and cs[0] == 0:
            cs.pop(0)
        if not cs:
            raise ValueError("zero polynomial")
        g = reduce(math.gcd, (abs(c) for c in cs))
        cs = [c // g for c in cs]
        if cs[0] < 0:
            cs = [-c for c in cs]
        return cls(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coeffs)

    def norm2(self) -> mp.mpf:
        """Euclidean norm of the coefficient vector (ambient precision)."""
        return mp.sqrt(mp.fsum(mp.mpf(c) * c for c in self.coeffs))

    def evaluate(self, value: mp.mpf) -> mp.mpf:
        """Horner evaluation at the ambient mpmath precision."""
        acc = mp.mpf(self.coeffs[0])
        for c in self.coeffs[1:]:
            acc = acc * value + c
        return acc

    def coeff_csv(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    def __str__(self) -> str:
        deg = self.degree
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            power = deg - i
            mag = abs(c)
            if power == 0:
                term = str(mag)
            else:
                var = "y" if power == 1 else f"y^{power}"
                term = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts) if parts else "0"


@dataclass(frozen=True)
class MinPolyRequest:
    """Inputs of one reconstruction: approximation, bounds, precision."""

    alpha_approx: mp.mpf
    degree_bound: int
    height_bound: int
    ctx: PrecisionContext

    def __post_init__(self):
        if self.degree_bound < 1:
            raise ValueError("degree_bound must be >= 1")
        if self.height_bound < 1:
            raise ValueError("height_bound must be >= 1")


@dataclass
class MinPolyResult:
    """Either the reconstructed polynomial or a no-polynomial certificate.

    ``stage_degree`` is the candidate degree of the window stage at which
    the relation appeared (n - k); ``window_confined`` records whether the
    relation had zero entries on all coordinates left of the final window.
    """

    polynomial: IntPolynomial | None
    bound: mp.mpf | None
    residual: mp.mpf | None
    found_stage: int | None
    stage_degree: int | None
    window_confined: bool | None
    iterations: int
    trace: StageTrace

    @property
    def kind(self) -> str:
        return "polynomial" if self.polynomial is not None else "bound"


def powers_vector(alpha: mp.mpf, n: int, ctx: PrecisionContext):
    """Descending powers (alpha^(n-1), ..., alpha, 1) by repeated multiplication."""
    if n < 2:
        raise ValueError("need n >= 2")
    if alpha == 0:
        raise ValueError("alpha must be nonzero (powers would be zero entries)")
    with ctx.workprec():
        alpha = mp.mpf(alpha)
        xs = [mp.mpf(1), alpha]
        for _ in range(n - 2):
            xs.append(xs[-1] * alpha)
        xs.reverse()
        return xs


def relation_to_polynomial(m) -> IntPolynomial:
    """Map a relation on descending powers to the canonical polynomial.

    The entries of ``m`` are already the descending coefficients; leading
    zeros are stripped and content/sign normalized.
    """
    if all(v == 0 for v in m):
        raise ValueError("zero relation vector")
    return IntPolynomial.from_coeffs(m)


def residual_check(p: IntPolynomial, alpha: mp.mpf, ctx: PrecisionContext):
    """Evaluate |p(alpha)| and accept iff it is residual-small.

    Acceptance threshold: eps_residual * ||p||_2 * max(1, |alpha|)^degree,
    which scales the plain residual by the conditioning of the evaluation.
    Returns (accepted, residual).
    """
    with ctx.workprec():
        residual = abs(p.evaluate(mp.mpf(alpha)))
        scale = max(mp.mpf(1), abs(mp.mpf(alpha))) ** p.degree
        return residual <= ctx.eps_residual * p.norm2() * scale, residual


def minpoly(req: MinPolyRequest, gamma=None, strict_norm: bool = False) -> MinPolyResult:
    """Reconstruct the minimal polynomial of ``req.alpha_approx`` within bounds.

    Runs the incremental search on the powers vector of length
    degree_bound + 1 with the height bound as the relation 2-norm bound.
    Stages scan suffixes first, so candidate degrees are explored in
    increasing order and the first hit has minimal degree within the
    bounds.

    ``strict_norm`` multiplies the norm bound by sqrt(degree_bound + 1),
    which makes the search exhaustive over the height bound: a polynomial
    of height <= h and degree <= d has coefficient 2-norm at most
    h*sqrt(d+1), so window exhaustion cannot fire at a stage whose
    sub-vector carries a conforming relation, and a bound outcome rules
    out every polynomial within both bounds.  With the default direct
    mapping the search is cheaper but bounds the coefficient 2-norm
    instead of the height, so polynomials whose 2-norm exceeds the height
    bound may be missed.

    Either way a found polynomial whose height exceeds the bound is
    suppressed: the result then reports no polynomial but carries no
    certificate (``bound`` stays None), since the search ended by finding
    the over-tall relation rather than by exhausting the window.  A
    no-polynomial outcome with ``bound`` set certifies that nothing
    within both bounds annihilates the approximation at this precision.
    """
    ctx = req.ctx
    alpha = req.alpha_approx
    if alpha == 0:
        return MinPolyResult(
            polynomial=IntPolynomial((1, 0)),
            bound=None,
            residual=mp.mpf(0),
            found_stage=None,
            stage_degree=1,
            window_confined=True,
            iterations=0,
            trace=StageTrace(),
        )
    n = req.degree_bound + 1
    xs = powers_vector(alpha, n, ctx)
    with ctx.workprec():
        m_norm = mp.mpf(req.height_bound)
        if strict_norm:
            m_norm = m_norm * mp.sqrt(n)
    outcome = ipslq(xs, m_norm, ctx, gamma=gamma)
    if outcome.kind == "bound":
        return MinPolyResult(
            polynomial=None,
            bound=outcome.bound,
            residual=None,
            found_stage=None,
            stage_degree=None,
            window_confined=None,
            iterations=outcome.iterations,
            trace=outcome.trace,
        )
    p = relation_to_polynomial(outcome.relation)
    accepted, residual = residual_check(p, alpha, ctx)
    if not accepted:
        raise PrecisionExhaustedError(
            "reconstructed polynomial fails the residual check; "
            "increase decimal_digits and retry"
        )
    if p.height > req.height_bound:
        return MinPolyResult(
            polynomial=None,
            bound=None,
            residual=None,
            found_stage=None,
            stage_degree=None,
            window_confined=None,
            iterations=outcome.iterations,
            trace=outcome.trace,
        )
    k = outcome.trace.records[-1].k
    confined = all(v == 0 for v in outcome.relation[: k - 1])
    return MinPolyResult(
        polynomial=p,
        bound=None,
        residual=residual,
        found_stage=k,
        stage_degree=n - k,
        window_confined=confined,
        iterations=outcome.iterations,
        trace=outcome.trace,
    )
