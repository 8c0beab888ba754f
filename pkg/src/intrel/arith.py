"""Precision regime: working precision and the numeric thresholds derived from it.

Every module in this package does its real arithmetic in mpmath binary
floats carrying ``precision_bits`` significand bits.  A PrecisionContext
fixes that bit count from a requested number of decimal digits and derives
the two thresholds the relation-finding loop consumes: ``eps_zero`` (when a
diagonal entry counts as numerically zero) and ``eps_residual`` (when a
candidate relation's residual counts as an actual zero of the input).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
from mpmath.libmp import from_rational, round_nearest

__all__ = [
    "PrecisionContext",
    "make_context",
    "parse_decimal",
    "format_real",
    "nearest_int",
]

_DECIMAL_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?\Z")


@dataclass(frozen=True)
class PrecisionContext:
    """Immutable bundle of working precision and derived thresholds.

    ``precision_bits`` is the significand width used for all real
    arithmetic.  ``eps_zero`` is the diagonal-zero threshold, ``eps_residual``
    the relation-residual acceptance threshold; both are exact powers of two
    so they are representable at any precision.
    """

    decimal_digits: int
    guard_bits: int
    precision_bits: int
    eps_zero: mp.mpf
    eps_residual: mp.mpf

    def workprec(self):
        """mpmath context manager setting this precision."""
        return mp.workprec(self.precision_bits)


def make_context(decimal_digits: int, guard_bits: int = 0) -> PrecisionContext:
    """Build a PrecisionContext for the given number of input decimal digits.

    precision_bits = ceil(decimal_digits * log2(10)) + guard_bits, computed
    exactly via the bit length of 10**decimal_digits (10**d is never a power
    of two, so bit_length equals the ceiling).
    """
    if decimal_digits < 1:
        raise ValueError("decimal_digits must be >= 1")
    if guard_bits < 0:
        raise ValueError("guard_bits must be >= 0")
    bits = (10 ** decimal_digits).bit_length() + guard_bits
    eps_zero = mp.mpf((0, 1, -((9 * bits) // 10), 1))
    eps_residual = mp.mpf((0, 1, -(bits // 2), 1))
    return PrecisionContext(
        decimal_digits=decimal_digits,
        guard_bits=guard_bits,
        precision_bits=bits,
        eps_zero=eps_zero,
        eps_residual=eps_residual,
    )


def parse_decimal(text: str, ctx: PrecisionContext) -> mp.mpf:
    """Parse a decimal string to a float at ctx precision with one rounding.

    The string is converted to its exact rational value first, then rounded
    once (to nearest) to ``ctx.precision_bits``.  Accepts an optional sign,
    digits with an optional fractional part, and an optional decimal
    exponent.  Raises ValueError on anything else, including empty input.
    """
    if not isinstance(text, str):
        raise ValueError(f"expected a decimal string, got {type(text).__name__}")
    text = text.strip()
    if not text or not _DECIMAL_RE.match(text):
        raise ValueError(f"malformed decimal string: {text!r}")
    exact = Fraction(text)
    # wrap inside the target precision: mpf(tuple) re-rounds at the ambient one
    with ctx.workprec():
        return mp.mpf(
            from_rational(exact.numerator, exact.denominator, ctx.precision_bits, round_nearest)
        )


def format_real(value: mp.mpf, ctx: PrecisionContext) -> str:
    """Render at enough decimal digits that parse_decimal round-trips bit-exactly."""
    digits = ctx.precision_bits * 30103 // 100000 + 3
    with ctx.workprec():
        return mp.nstr(value, digits, strip_zeros=True)


def nearest_int(value: mp.mpf) -> int:
    """Nearest integer with ties rounded away from zero.

    This is the rounding used by size reduction; fixing the tie direction
    keeps reduction trajectories identical across platforms.
    """
    if value >= 0:
        return int(mp.floor(value + mp.mpf(0.5)))
    return -int(mp.floor(-value + mp.mpf(0.5)))
