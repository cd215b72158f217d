from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psilog.numcore import (
    INF, DegeneratePolynomialError, PrecisionContext, RationalPolynomial, cauchy_bound,
    certify_positive, count_real_roots, count_roots_open, isolate_roots, poly_derivative,
    poly_eval_exact, poly_gcd, sturm_sequence,
)

F = Fraction
X = RationalPolynomial([0, 1])

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=64)


def from_roots(roots):
    p = RationalPolynomial([1])
    for r in roots:
        p = p * RationalPolynomial([-r, 1])
    return p


def test_construction_strips_trailing_zeros():
    p = RationalPolynomial([1, 2, 0, 0])
    assert p.degree == 1
    assert RationalPolynomial().degree == -1
    assert RationalPolynomial.from_descending([3, 0, 1]) == RationalPolynomial([1, 0, 3])


def test_arithmetic():
    p = RationalPolynomial([1, 1])
    assert p * p == RationalPolynomial([1, 2, 1])
    assert p ** 3 == RationalPolynomial([1, 3, 3, 1])
    assert (p * p - p) == RationalPolynomial([0, 1, 1])
    q, r = RationalPolynomial([1, 3, 3, 1]).divmod(RationalPolynomial([2, 1]))
    assert q * RationalPolynomial([2, 1]) + r == RationalPolynomial([1, 3, 3, 1])
    assert r.degree < 1


def test_shift_and_compose():
    p = RationalPolynomial.from_descending([1, 0, -2])
    assert p.shift(1) == RationalPolynomial.from_descending([1, 2, -1])
    assert p.compose(X * X) == RationalPolynomial.from_descending([1, 0, 0, 0, -2])


def test_eval_exact_and_real():
    p = RationalPolynomial([F(1, 3), -1, 2])
    assert poly_eval_exact(p, F(1, 2)) == F(1, 3)
    ctx = PrecisionContext(30)
    assert abs(p.eval_real(ctx.mp.mpf(0.5), ctx) - ctx.mp.mpf(1) / 3) < ctx.eps


def test_derivative():
    p = RationalPolynomial([5, 0, 3, 1])
    assert poly_derivative(p) == RationalPolynomial([0, 6, 3])
    assert poly_derivative(p, 3) == RationalPolynomial([6])
    assert poly_derivative(p, 4).is_zero()


def test_gcd_monic():
    a = from_roots([1, 2, 2])
    b = from_roots([2, 3])
    assert poly_gcd(a, b) == from_roots([2])


def test_sturm_degenerate():
    with pytest.raises(DegeneratePolynomialError, match="degenerate polynomial"):
        sturm_sequence(RationalPolynomial())
    with pytest.raises(DegeneratePolynomialError):
        certify_positive(RationalPolynomial(), 0, 1)


def test_root_count_known():
    p = from_roots([F(-1), F(1, 3), F(2)])
    assert count_real_roots(p) == 3
    assert count_real_roots(p, 0, 2) == 2  # (0, 2] includes 2
    assert count_roots_open(p, 0, 2) == 1
    assert count_real_roots(X * X + 1) == 0
    assert count_real_roots(from_roots([1, 1, 1])) == 1  # distinct roots


def test_cauchy_bound_brackets_roots():
    p = from_roots([-7, F(1, 2), 9])
    assert cauchy_bound(p) > 9


def test_isolate_roots():
    p = X * X - 2
    ivs = isolate_roots(p, 0, 2, width=F(1, 10**6))
    assert len(ivs) == 1
    lo, hi = ivs[0]
    assert lo * lo < 2 <= hi * hi
    assert hi - lo <= F(1, 10**6)


def test_certify_positive_pass_and_fail():
    cert = certify_positive(X * X + 1)
    assert cert.passed and cert.roots_in_interval == 0
    cert = certify_positive(X * X - 2, 0, 2)
    assert not cert.passed
    assert poly_eval_exact(X * X - 2, cert.witness) <= 0
    assert certify_positive(X * X - 2, 2, INF).passed


def test_certify_positive_touching_root():
    # (x - 1/2)^2 touches zero without changing sign
    p = from_roots([F(1, 2), F(1, 2)])
    cert = certify_positive(p, 0, 1)
    assert not cert.passed
    assert cert.witness == F(1, 2) and cert.witness_value == 0


def test_certify_root_at_endpoint_is_outside_open_interval():
    p = X - 1
    assert certify_positive(p, 1, 3).passed
    assert not certify_positive(p, 0, 3).passed


def test_empty_interval_rejected():
    with pytest.raises(ValueError):
        certify_positive(X + 1, 1, 1)


def test_precision_context():
    ctx = PrecisionContext(40)
    assert ctx.working_digits > 40
    assert ctx.real("1/3") == ctx.mp.mpf(1) / 3
    with pytest.raises(ValueError):
        PrecisionContext(5)


@settings(max_examples=60, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=6, unique=True), rationals, rationals)
def test_root_count_matches_construction(roots, a, b):
    lo, hi = min(a, b), max(a, b)
    if lo == hi:
        hi = lo + 1
    p = from_roots(roots)
    assert count_real_roots(p, lo, hi) == sum(1 for r in roots if lo < r <= hi)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=7), rationals, st.integers(1, 30),
       st.data())
def test_certificate_revalidates_on_random_points(coeffs, lo, span, data):
    p = RationalPolynomial(coeffs)
    if p.is_zero():
        return
    hi = lo + span
    cert = certify_positive(p, lo, hi)
    points = data.draw(st.lists(st.fractions(min_value=lo, max_value=hi, max_denominator=997),
                                min_size=1, max_size=100))
    inside = [t for t in points if lo < t < hi]
    if cert.passed:
        assert all(poly_eval_exact(p, t) > 0 for t in inside)
    elif cert.witness is not None and cert.witness_value <= 0:
        assert lo < cert.witness < hi


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=6),
       st.lists(st.integers(-9, 9), min_size=1, max_size=6), rationals)
def test_ring_homomorphism(a, b, t):
    p, q = RationalPolynomial(a), RationalPolynomial(b)
    assert (p * q)(t) == p(t) * q(t)
    assert (p + q)(t) == p(t) + q(t)
    assert p.compose(q)(t) == p(q(t))


def test_multiple_root_at_interval_end():
    p = from_roots([-1, -1, F(1, 2)])
    assert count_real_roots(p, -1, INF) == 1
    assert count_roots_open(p, -1, F(1, 2)) == 0
    assert certify_positive(from_roots([-1, -1]) * (X * X + 1), -1, INF).passed
