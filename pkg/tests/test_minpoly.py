"""Minimal polynomial reconstruction and the polynomial type."""

import mpmath as mp
import pytest

from intrel import (
    IntPolynomial,
    MinPolyRequest,
    make_context,
    minpoly,
    parse_decimal,
    powers_vector,
    relation_to_polynomial,
    residual_check,
)
from intrel.oracle import exact_minpoly_radical_sum


def test_powers_vector_descending():
    ctx = make_context(30)
    with ctx.workprec():
        xs = powers_vector(mp.sqrt(2), 3, ctx)
        assert abs(xs[0] - 2) < mp.mpf(2) ** -90
        assert xs[1] == mp.sqrt(2)
        assert xs[2] == 1
        assert powers_vector(mp.mpf(1), 4, ctx) == [1, 1, 1, 1]
        assert powers_vector(mp.mpf("0.75"), 2, ctx) == [mp.mpf("0.75"), 1]
    with pytest.raises(ValueError):
        powers_vector(mp.mpf(0), 3, ctx)
    with pytest.raises(ValueError):
        powers_vector(mp.mpf(2), 1, ctx)


def test_relation_to_polynomial_normalizes():
    assert relation_to_polynomial([1, 0, -2]).coeffs == (1, 0, -2)
    assert relation_to_polynomial([-2, 0, 4]).coeffs == (1, 0, -2)
    assert relation_to_polynomial([0, 4, -3]).coeffs == (4, -3)
    with pytest.raises(ValueError):
        relation_to_polynomial([0, 0, 0])


def test_polynomial_canonical_form_enforced():
    with pytest.raises(ValueError):
        IntPolynomial((-1, 2))
    with pytest.raises(ValueError):
        IntPolynomial((2, 4))
    with pytest.raises(ValueError):
        IntPolynomial(())
    p = IntPolynomial.from_coeffs([-3, 0, 6])
    assert p.coeffs == (1, 0, -2) and p.degree == 2 and p.height == 2


def test_polynomial_rendering():
    assert str(IntPolynomial((1, 0, -10, 0, 1))) == "y^4 - 10*y^2 + 1"
    assert str(IntPolynomial((4, -3))) == "4*y - 3"
    assert str(IntPolynomial((1, 0))) == "y"
    assert IntPolynomial((1, 0, -10, 0, 1)).coeff_csv() == "1,0,-10,0,1"


def test_residual_check_examples():
    ctx = make_context(30)
    ok, r = residual_check(IntPolynomial((1, -1)), mp.mpf(1), ctx)
    assert ok and r == 0
    ok, r = residual_check(IntPolynomial((1, 0, -2)), mp.mpf(1.5), ctx)
    assert not ok and r == mp.mpf("0.25")
    ctx11 = make_context(11)
    alpha = parse_decimal("1.41421356237", ctx11)
    ok, r = residual_check(IntPolynomial((1, 0, -2)), alpha, ctx11)
    assert ok and float(r) < 1e-10


def test_minpoly_sqrt3_plus_sqrt2_at_table_bounds():
    ctx = make_context(500)
    with ctx.workprec():
        alpha = mp.sqrt(3) + mp.sqrt(2)
    res = minpoly(MinPolyRequest(alpha, 5, 11, ctx))
    assert res.polynomial.coeffs == (1, 0, -10, 0, 1)
    assert res.polynomial == exact_minpoly_radical_sum(2, 2)
    assert res.stage_degree == 4
    assert res.window_confined is True


def test_minpoly_sqrt2_found_at_degree_two():
    ctx = make_context(100)
    with ctx.workprec():
        alpha = mp.sqrt(2)
    res = minpoly(MinPolyRequest(alpha, 4, 5, ctx))
    assert res.polynomial.coeffs == (1, 0, -2)
    assert res.stage_degree == 2  # degrees 3, 4 never explored
    exhausted_degrees = [5 - r.k for r in res.trace.records if r.outcome == "extended"]
    assert exhausted_degrees == [1]


def test_minpoly_rational():
    ctx = make_context(50)
    res = minpoly(MinPolyRequest(mp.mpf("0.75"), 3, 5, ctx))
    assert res.polynomial.coeffs == (4, -3)
    assert res.stage_degree == 1


def test_minpoly_zero_is_y():
    ctx = make_context(50)
    res = minpoly(MinPolyRequest(mp.mpf(0), 3, 5, ctx))
    assert res.polynomial.coeffs == (1, 0)
    assert res.residual == 0


def test_minpoly_no_polynomial_when_height_bound_too_small():
    ctx = make_context(100)
    with ctx.workprec():
        alpha = mp.sqrt(2)
    # powers of a correctly-rounded sqrt(2) contain the exact relation
    # alpha^2 - 2 = 0, so the search finds y^2 - 2 and filters it for
    # exceeding the height bound: no polynomial, no certificate
    res = minpoly(MinPolyRequest(alpha, 4, 1, ctx))
    assert res.kind == "bound"
    assert res.polynomial is None
    with ctx.workprec():
        alpha = mp.sqrt(3) + mp.sqrt(2)
    # here nothing collapses exactly and the window genuinely exhausts
    res = minpoly(MinPolyRequest(alpha, 4, 1, ctx))
    assert res.kind == "bound"
    assert res.polynomial is None
    assert res.bound == 1


def test_minpoly_strict_mode_suppresses_overheight():
    # strict mode widens the norm bound enough to FIND y^2 - 2 (norm
    # sqrt(5) = 1 * sqrt(5)), but its height 2 violates the bound 1, so no
    # polynomial and no certificate may be reported
    ctx = make_context(100)
    with ctx.workprec():
        alpha = mp.sqrt(2)
    res = minpoly(MinPolyRequest(alpha, 4, 1, ctx), strict_norm=True)
    assert res.polynomial is None
    assert res.bound is None


def test_minpoly_strict_mode_height_conformance():
    for s, t, digits in ((2, 2, 200), (2, 3, 200), (3, 3, 300)):
        truth = exact_minpoly_radical_sum(s, t)
        ctx = make_context(digits)
        with ctx.workprec():
            alpha = mp.root(3, s) + mp.root(2, t)
        res = minpoly(
            MinPolyRequest(alpha, truth.degree + 1, truth.height + 1, ctx),
            strict_norm=True,
        )
        assert res.polynomial == truth
        assert res.polynomial.height <= truth.height + 1


def test_minpoly_degree_order_exploration():
    # all stages below the found degree report exhaustion first
    ctx = make_context(300)
    with ctx.workprec():
        alpha = mp.root(3, 3) + mp.root(2, 3)
    truth = exact_minpoly_radical_sum(3, 3)
    res = minpoly(MinPolyRequest(alpha, 10, 126, ctx), strict_norm=True)
    assert res.polynomial == truth
    n = 11
    degrees = [n - r.k for r in res.trace.records]
    assert degrees == list(range(1, res.stage_degree + 1))
    assert all(r.outcome == "extended" for r in res.trace.records[:-1])


def test_minpoly_request_validation():
    ctx = make_context(30)
    with pytest.raises(ValueError):
        MinPolyRequest(mp.mpf(1), 0, 5, ctx)
    with pytest.raises(ValueError):
        MinPolyRequest(mp.mpf(1), 3, 0, ctx)


def test_minpoly_table_bounds_with_and_without_plus_one():
    # boundary behavior at the family heights: both M and M+1 recover row 1
    ctx = make_context(200)
    with ctx.workprec():
        alpha = mp.sqrt(3) + mp.sqrt(2)
    truth = exact_minpoly_radical_sum(2, 2)
    for bound in (10, 11):
        res = minpoly(MinPolyRequest(alpha, 5, bound, ctx), strict_norm=True)
        assert res.polynomial == truth
