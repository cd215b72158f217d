from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psilog.approximant import A0, A0P, A0PP, A1, A_INFINITY, ParamA, L, c0, solve_x0
from psilog.bounds import (
    HALFSHIFT_DIRECTION, Baseline, Enclosure, NoTheoremError, Target, Theorem, Verdict,
    baseline_bounds, compare_less, halfshift_bound_exact, halfshift_bounds, harmonic_enclosure,
    polygamma_bounds, psi_enclosure, psi_enclosure_offset, residual, verify_enclosure,
)
from psilog.numcore import PrecisionContext
from psilog.oracle import DomainError, euler_gamma, polygamma

CTX = PrecisionContext(40)
F = Fraction
xs = st.fractions(min_value=F(1, 1000), max_value=1000, max_denominator=10**6)


def passes(enc):
    return verify_enclosure(enc, CTX)[0] is Verdict.PASS


def test_three_valued_compare():
    assert compare_less(1, 2, 0.1) is Verdict.PASS
    assert compare_less(2, 1, 0.1) is Verdict.FAIL
    assert compare_less(1, 1.1, 0.1) is Verdict.INDETERMINATE
    assert compare_less(1, 1, 0.1, strict=False) is Verdict.PASS


def test_enclosure_contains_logic():
    e = Enclosure(CTX.real(0), CTX.real(1), Target.PSI, (), 0)
    assert e.contains(CTX.real(F(1, 2)), 1e-30) is Verdict.PASS
    assert e.contains(CTX.real(2), 1e-30) is Verdict.FAIL
    assert e.contains(CTX.real(1), 1e-30) is Verdict.INDETERMINATE
    open_top = Enclosure(CTX.real(0), CTX.mp.inf, Target.PSI, (), 0)
    assert open_top.contains(CTX.real(10**9), 1e-30) is Verdict.PASS


def test_residual_examples():
    assert abs(residual(0, 0, F(1, 2), CTX) - CTX.mp.mpf("4.0043e-4")) < 1e-8
    assert abs(residual(0, 0, F(3, 5), CTX) - CTX.mp.mpf("-2.3727e-3")) < 1e-7
    assert abs(residual(0, 10**6, A1, CTX)) < 1e-40
    with pytest.raises(ValueError):
        residual(4, 1, A1, CTX)


def test_psi_enclosure_examples():
    e = psi_enclosure(1, CTX)
    assert passes(e)
    assert e.lo < 1 - euler_gamma(CTX) < e.hi
    assert psi_enclosure(10, CTX).width < 1e-7
    assert abs(psi_enclosure(F(1, 10**20), CTX).lo + euler_gamma(CTX)) < 1e-18
    with pytest.raises(DomainError):
        psi_enclosure(-1, CTX)


def test_psi_enclosure_branches():
    x0, _ = solve_x0(CTX)
    near_peak = psi_enclosure(F(3, 20), CTX)
    assert Theorem.PSI_PEAK_OFFSET in near_peak.justification
    far = psi_enclosure(5, CTX)
    assert Theorem.PSI_UPPER_A1 in far.justification


def test_offset_pairs():
    e = psi_enclosure_offset(1, F(4, 5), CTX)
    assert e.justification == (Theorem.OFFSET_PAIR_A1,) and passes(e)
    assert abs(e.hi - e.lo - c0(F(4, 5), CTX)) < 1e-35
    e = psi_enclosure_offset(1, F(1, 3), CTX)
    assert e.justification == (Theorem.OFFSET_PAIR_A0P,) and passes(e)
    e = psi_enclosure_offset(2, F(4, 15), CTX)
    assert passes(e)
    mp = CTX.mp
    assert abs(e.lo - (F(16, 21) * mp.log(mp.mpf(5) / 2) + F(5, 42) * mp.log(mp.mpf(33) / 5))) < 1e-35
    e = psi_enclosure_offset(F(1, 2), F(1, 2), CTX)
    assert mp.isinf(e.hi) and passes(e)
    e = psi_enclosure_offset(F(-1, 2), A1, CTX)
    assert mp.isinf(e.lo) and passes(e)
    with pytest.raises(NoTheoremError, match="no theorem covers this regime"):
        psi_enclosure_offset(1, F(3, 5), CTX)


def test_harmonic_touching_cases():
    e = harmonic_enclosure(1, A1, CTX)
    assert abs(e.lo - 1) < 1e-38 and passes(e)
    e = harmonic_enclosure(1, F(1, 2), CTX)
    assert abs(e.hi - 1) < 1e-38 and passes(e)
    e = harmonic_enclosure(10, F(1, 2), CTX)
    assert e.lo < CTX.real(F(7381, 2520)) < e.hi and passes(e)
    with pytest.raises(NoTheoremError):
        harmonic_enclosure(3, F(3, 5), CTX)
    with pytest.raises(ValueError):
        harmonic_enclosure(0, A1, CTX)


def test_polygamma_bounds_examples():
    mp = CTX.mp
    e = polygamma_bounds(1, 0, CTX)
    assert abs(e.hi - mp.pi**2 / 6) < 1e-38 and passes(e)
    e = polygamma_bounds(2, 0, CTX)
    assert abs(e.lo - polygamma(2, 1, CTX)) < 1e-38 and passes(e)
    e = polygamma_bounds(1, 1, CTX)
    assert e.lo < mp.pi**2 / 6 - 1 < e.hi
    with pytest.raises(ValueError):
        polygamma_bounds(3, 1, CTX)


def test_halfshift_examples():
    assert halfshift_bound_exact(1, F(0)) == 0
    assert halfshift_bound_exact(1, F(1, 2)) == F(115, 72)
    assert halfshift_bound_exact(3, F(1)) == F(160, 3) * (6585600 + 15052800 + 11696160 + 1820960 - 701703) / F(1107) ** 3
    assert CTX.real(halfshift_bound_exact(1, F(1, 2))) < polygamma(1, 1, CTX)
    with pytest.raises(DomainError):
        halfshift_bounds(1, F(-1, 2), CTX)
    b = halfshift_bounds(2, 1, CTX)
    assert b.direction == "upper" and b.order == 2


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([1, 2, 3]),
       st.fractions(min_value=F(-49, 100), max_value=200, max_denominator=10**4))
def test_halfshift_direction_against_oracle(k, x):
    b = halfshift_bounds(k, x, CTX)
    v = polygamma(k, CTX.real(x) + F(1, 2), CTX)
    if HALFSHIFT_DIRECTION[k] == "lower":
        assert b.value < v
    else:
        assert b.value > v
    assert abs(b.value - halfshift_bounds(k, CTX.real(x), CTX).value) < 1e-35 * max(1, abs(v))


def test_baselines():
    mp = CTX.mp
    g = euler_gamma(CTX)
    he = baseline_bounds(1, Baseline.HE, CTX)
    assert abs(he.lo - mp.log(2 + mp.exp(-2 * g)) / 2) < 1e-38 and passes(he)
    ba = baseline_bounds(1, Baseline.BATIR, CTX)
    assert abs(ba.lo - mp.log(1.5)) < 1e-38 and abs(ba.hi - mp.log(1 + mp.exp(-g))) < 1e-38
    assert passes(ba)
    assert psi_enclosure(5, CTX).width < baseline_bounds(5, Baseline.HE, CTX).width


@settings(max_examples=80, deadline=None)
@given(xs)
def test_containment_random(x):
    assert passes(psi_enclosure(x, CTX))
    assert passes(polygamma_bounds(1, x, CTX))
    assert passes(polygamma_bounds(2, x, CTX))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2000), st.sampled_from([F(1, 2), A1, F(1), A_INFINITY, F(2, 5)]))
def test_harmonic_containment(n, a):
    assert verify_enclosure(harmonic_enclosure(n, a, CTX), CTX)[0] is not Verdict.FAIL


def grid(lo, hi, n=60):
    step = (F(hi) - F(lo)) / (n + 1)
    return [F(lo) + step * (i + 1) for i in range(n)]


def test_residual_sign_pattern_a1():
    for x in grid(F(-9, 10), 100):
        assert residual(0, x, A1, CTX) < 0
        assert residual(1, x, A1, CTX) > 0
        assert residual(2, x, A1, CTX) < 0
        assert residual(3, x, A1, CTX) > 0


def test_residual_signs_other_thresholds():
    for x in grid(0, 100):
        assert residual(1, x, A0P, CTX) < 0
        assert residual(2, x, A0PP, CTX) > 0
        assert residual(0, x, A0, CTX) > 0


def test_peak_near_x0():
    x0, peak = solve_x0(CTX)
    vals = [(residual(0, x, A0, CTX), x) for x in grid(0, F(1, 2), 200)]
    best = max(vals)
    assert abs(best[1] - F(str(x0))) < F(1, 200)
    assert best[0] <= peak


def test_nesting_above_a1():
    a_s = [A1, ParamA(F(4, 5)), ParamA(F(1)), ParamA(F(3))]
    for x in grid(F(1, 10), 20, 20):
        uppers = [L(x, a, CTX) for a in a_s]
        lowers = [L(x, a, CTX) - c0(a, CTX) for a in a_s]
        assert uppers == sorted(uppers)
        assert lowers == sorted(lowers, reverse=True)
