import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psilog.numcore import PrecisionContext
from psilog.oracle import (
    DomainError, InsufficientPrecisionError, OracleConfig, bernoulli, euler_gamma, harmonic,
    harmonic_real, polygamma, psi, zeta3,
)

CTX = PrecisionContext(50)


def close(a, b, digits):
    return abs(a - b) <= mpmath.mpf(10) ** (-digits) * max(1, abs(b))


def reference(k, x, dps=70):
    with mpmath.workdps(dps):
        return mpmath.psi(k, mpmath.mpf(x))


def test_bernoulli_matches_mpmath():
    for m in range(0, 40):
        assert bernoulli(m) == Fraction(mpmath.bernfrac(m)[0], mpmath.bernfrac(m)[1])


def test_harmonic_exact():
    assert harmonic(1) == 1
    assert harmonic(10) == Fraction(7381, 2520)
    assert harmonic(200) == sum(Fraction(1, k) for k in range(1, 201))
    with pytest.raises(ValueError, match="n must be positive"):
        harmonic(0)
    assert harmonic_real(0, CTX) == 0


def test_harmonic_real_large_n():
    n = 60_000
    with mpmath.workdps(60):
        ref = mpmath.harmonic(n)
    assert close(harmonic_real(n, CTX), ref, 48)


def test_special_values():
    mp = CTX.mp
    assert close(polygamma(0, 1, CTX), -euler_gamma(CTX), 49)
    assert close(polygamma(1, 1, CTX), mp.pi**2 / 6, 48)
    assert close(polygamma(3, 1, CTX), mp.pi**4 / 15, 48)
    with mpmath.workdps(70):
        z3 = mpmath.zeta(3)
        assert close(polygamma(2, 1, CTX), -2 * z3, 48)
        assert close(zeta3(CTX), z3, 48)
        assert close(euler_gamma(CTX), +mpmath.euler, 49)
        assert close(psi(Fraction(1, 2), CTX), -mpmath.euler - 2 * mpmath.log(2), 48)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.floats(min_value=1e-3, max_value=1e4, allow_nan=False))
def test_against_mpmath(k, x):
    xf = Fraction(x)
    v = polygamma(k, xf, CTX)
    assert close(v, reference(k, CTX.real(xf)), 47)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.fractions(min_value=Fraction(1, 1000), max_value=1000,
                                       max_denominator=10**6))
def test_recurrence(k, x):
    lhs = polygamma(k, x + 1, CTX) - polygamma(k, x, CTX)
    rhs = (-1) ** k * math.factorial(k) / CTX.real(x) ** (k + 1)
    assert abs(lhs - rhs) < CTX.mp.mpf(10) ** (-48) * max(1, abs(rhs))


def test_monotonicity_signs():
    xs = [Fraction(1, 10), Fraction(1), Fraction(7), Fraction(123)]
    for a, b in zip(xs, xs[1:]):
        assert polygamma(0, a, CTX) < polygamma(0, b, CTX)
        assert polygamma(1, a, CTX) > polygamma(1, b, CTX)
        assert polygamma(2, a, CTX) < polygamma(2, b, CTX)


def test_domain_and_order_errors():
    with pytest.raises(DomainError, match="pole/branch"):
        polygamma(0, 0, CTX)
    with pytest.raises(DomainError):
        polygamma(1, -2.5, CTX)
    with pytest.raises(ValueError):
        polygamma(4, 1, CTX)


def test_insufficient_precision_budget():
    with pytest.raises(InsufficientPrecisionError, match="insufficient precision budget"):
        polygamma(0, 1, CTX, OracleConfig(shift_threshold=10, series_terms=3))
    with pytest.raises(ValueError):
        OracleConfig(shift_threshold=5)


def test_threshold_scales_with_precision():
    assert OracleConfig.for_context(PrecisionContext(50)).shift_threshold == 30
    assert OracleConfig.for_context(PrecisionContext(200)).shift_threshold > 30


@pytest.mark.parametrize("digits", [20, 80, 150])
def test_other_precisions(digits):
    ctx = PrecisionContext(digits)
    with mpmath.workdps(digits + 20):
        ref = mpmath.psi(1, mpmath.mpf(3) / 7)
    assert close(polygamma(1, Fraction(3, 7), ctx), ref, digits - 2)
