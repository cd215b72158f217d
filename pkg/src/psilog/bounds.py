"""Two-sided enclosures for psi, psi', psi'' and harmonic numbers.

Every enclosure names the inequality that justifies it.  Containment checks
against the oracle are three-valued: a strict inequality whose gap is inside
the oracle's error ball is INDETERMINATE rather than PASS or FAIL.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .approximant import (
    A0, A0P, A0PP, A1, ParamA, Regime, L, L_partial_x, c0, c1, solve_x0,
)
from .numcore import DEFAULT_CONTEXT, PrecisionContext
from .oracle import DomainError, euler_gamma, harmonic, oracle_eps, polygamma


class NoTheoremError(ValueError):
    pass


class Verdict(enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INDETERMINATE = "INDETERMINATE"


class Target(enum.Enum):
    PSI = "psi"
    PSI1 = "psi1"
    PSI2 = "psi2"
    HARMONIC = "harmonic"


class Theorem(enum.Enum):
    PSI_UPPER_A1 = "psi(x+1) < L(x,a), a >= a1"
    PSI_LOWER_A0 = "psi(x+1) > L(x,a), 1/15 < a <= a0"
    PSI_PEAK_OFFSET = "psi(x+1) <= L(x,a0) + F_a0(x0)"
    OFFSET_PAIR_A1 = "L - c0(a) < psi(x+1) < L, a >= a1"
    OFFSET_PAIR_A0P = "L < psi(x+1) < L - c0(a), 1/15 < a <= a0'"
    TRIGAMMA_PAIR = "L_x(x,a1) < psi'(x+1) < L_x(x,a0')"
    TETRAGAMMA_PAIR = "L_xx(x,a0'') < psi''(x+1) < L_xx(x,a1)"
    HARMONIC_A1 = "L(n,a) + c1(a) < H_n < L(n,a) + gamma, a >= a1"
    HARMONIC_A0 = "L(n,a) + gamma < H_n < L(n,a) + c1(a), 1/15 < a < a0"
    BASELINE_BATIR = "ln(x+1/2) < psi(x+1) <= ln(x+exp(-gamma))"
    BASELINE_HE = "ln(x^2+x+exp(-2 gamma))/2 <= psi(x+1) < ln(x^2+x+1/3)/2"


class Baseline(enum.Enum):
    BATIR = "batir"
    HE = "he"


def compare_less(lhs, rhs, eps, strict: bool = True) -> Verdict:
    """Three-valued ``lhs < rhs`` (or ``<=``) with a 2*eps margin."""
    gap = rhs - lhs
    if gap < -2 * eps:
        return Verdict.FAIL
    if not strict or gap > 2 * eps:
        return Verdict.PASS
    return Verdict.INDETERMINATE


@dataclass(frozen=True)
class Enclosure:
    """``lo (<|<=) target (<|<=) hi``; an infinite end means "no bound"."""

    lo: object
    hi: object
    target: Target
    justification: tuple[Theorem, ...]
    argument: object = None
    lo_strict: bool = True
    hi_strict: bool = True

    @property
    def width(self):
        return self.hi - self.lo

    def contains(self, value, eps) -> Verdict:
        verdicts = []
        if not _is_infinite(self.lo):
            verdicts.append(compare_less(self.lo, value, eps, self.lo_strict))
        if not _is_infinite(self.hi):
            verdicts.append(compare_less(value, self.hi, eps, self.hi_strict))
        for v in (Verdict.FAIL, Verdict.INDETERMINATE):
            if v in verdicts:
                return v
        return Verdict.PASS


def _is_infinite(v) -> bool:
    return bool(mpmath.isinf(v))


@dataclass(frozen=True)
class OneSidedBound:
    value: object
    direction: str  # "lower" or "upper"
    order: int


def oracle_value(enc: Enclosure, ctx: PrecisionContext = DEFAULT_CONTEXT):
    arg = enc.argument
    if enc.target is Target.HARMONIC:
        return ctx.real(harmonic(arg))
    k = {Target.PSI: 0, Target.PSI1: 1, Target.PSI2: 2}[enc.target]
    return polygamma(k, ctx.real(arg) + 1, ctx)


def verify_enclosure(enc: Enclosure, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """(verdict, oracle value) for the enclosure's target."""
    v = oracle_value(enc, ctx)
    return enc.contains(v, oracle_eps(ctx, v)), v


def residual(k: int, x, a, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """psi^(k)(x+1) - d^k L / dx^k (x, a)."""
    if k not in (0, 1, 2, 3):
        raise ValueError("k must be in 0..3")
    a = ParamA.of(a)
    xv = ctx.real(x)
    approx = L(xv, a, ctx) if k == 0 else L_partial_x(k, xv, a, ctx)
    return polygamma(k, xv + 1, ctx) - approx


def _positive_x(x, ctx):
    xv = ctx.real(x)
    if not xv > 0:
        raise DomainError("x must be positive")
    return xv


def _nonnegative_x(x, ctx):
    xv = ctx.real(x)
    if not xv >= 0:
        raise DomainError("x must be non-negative")
    return xv


def psi_enclosure(x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    """Tightest available bracket of psi(x+1) for x >= 0.

    The lower end is L(x, a0).  The upper end is the smaller of L(x, a1) and
    L(x, a0) + F_a0(x0); both are valid, so their minimum is too.  At x = 0
    the lower end equals psi(1) by the definition of a0.
    """
    xv = _nonnegative_x(x, ctx)
    at0 = xv == 0
    lo = L(xv, A0, ctx)
    _, peak = solve_x0(ctx)
    hi_a1 = L(xv, A1, ctx)
    hi_peak = lo + peak
    if hi_a1 <= hi_peak:
        return Enclosure(lo, hi_a1, Target.PSI,
                         (Theorem.PSI_LOWER_A0, Theorem.PSI_UPPER_A1), x, lo_strict=not at0)
    return Enclosure(lo, hi_peak, Target.PSI,
                     (Theorem.PSI_LOWER_A0, Theorem.PSI_PEAK_OFFSET), x,
                     lo_strict=not at0, hi_strict=False)


def psi_enclosure_offset(x, a, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    a = ParamA.of(a)
    mp = ctx.mp
    xv = ctx.real(x)
    regime = a.regime(ctx)
    if regime is Regime.AT_LEAST_A1:
        upper = L(xv, a, ctx)
        if xv <= 0:
            if not xv > -1:
                raise DomainError("x must exceed -1")
            return Enclosure(mp.ninf, upper, Target.PSI, (Theorem.PSI_UPPER_A1,), x)
        return Enclosure(upper - c0(a, ctx), upper, Target.PSI,
                         (Theorem.OFFSET_PAIR_A1,), x)
    xv = _positive_x(x, ctx)
    if regime in (Regime.BELOW_A0PP, Regime.A0PP_TO_A0P):
        lower = L(xv, a, ctx)
        return Enclosure(lower, lower - c0(a, ctx), Target.PSI,
                         (Theorem.OFFSET_PAIR_A0P,), x)
    if regime is Regime.A0P_TO_A0:
        return Enclosure(L(xv, a, ctx), mp.inf, Target.PSI, (Theorem.PSI_LOWER_A0,), x)
    raise NoTheoremError(f"no theorem covers this regime ({regime.value})")


def harmonic_enclosure(n: int, a, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    a = ParamA.of(a)
    regime = a.regime(ctx)
    base = L(n, a, ctx)
    g = euler_gamma(ctx)
    # at n = 1 the c1 side is attained by construction
    touching = n == 1
    if regime is Regime.AT_LEAST_A1:
        return Enclosure(base + c1(a, ctx), base + g, Target.HARMONIC,
                         (Theorem.HARMONIC_A1,), n, lo_strict=not touching)
    if regime is not Regime.A0_TO_A1 and a.name != "a0":
        return Enclosure(base + g, base + c1(a, ctx), Target.HARMONIC,
                         (Theorem.HARMONIC_A0,), n, hi_strict=not touching)
    raise NoTheoremError(f"no theorem covers this regime ({regime.value})")


def polygamma_bounds(k: int, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    """Bracket of psi'(x+1) (k = 1) or psi''(x+1) (k = 2) for x >= 0.

    At x = 0 the a0' (resp. a0'') side is an equality by definition.
    """
    xv = _nonnegative_x(x, ctx)
    at0 = xv == 0
    if k == 1:
        return Enclosure(L_partial_x(1, xv, A1, ctx), L_partial_x(1, xv, A0P, ctx),
                         Target.PSI1, (Theorem.TRIGAMMA_PAIR,), x, hi_strict=not at0)
    if k == 2:
        return Enclosure(L_partial_x(2, xv, A0PP, ctx), L_partial_x(2, xv, A1, ctx),
                         Target.PSI2, (Theorem.TETRAGAMMA_PAIR,), x, lo_strict=not at0)
    raise ValueError("k must be 1 or 2")


def halfshift_bound_exact(k: int, x: Fraction) -> Fraction:
    """Rational bound on psi^(k)(x + 1/2); direction given by :data:`HALFSHIFT_DIRECTION`."""
    x = Fraction(x)
    x2 = x * x
    d = 560 * x2 * x2 + 520 * x2 + 27
    if k == 1:
        return 20 * x * (84 * x2 + 71) / (1680 * x2 * x2 + 1560 * x2 + 81)
    if k == 2:
        return -Fraction(20, 3) * (47040 * x2**3 + 75600 * x2**2 + 30116 * x2 - 1917) / d**2
    if k == 3:
        num = 6585600 * x2**4 + 15052800 * x2**3 + 11696160 * x2**2 + 1820960 * x2 - 701703
        return Fraction(160, 3) * x * num / d**3
    raise ValueError("k must be 1, 2 or 3")


HALFSHIFT_DIRECTION = {1: "lower", 2: "upper", 3: "lower"}


def halfshift_bounds(k: int, x, ctx: PrecisionContext = DEFAULT_CONTEXT) -> OneSidedBound:
    """One-sided bound on psi^(k)(x + 1/2), x > -1/2."""
    if k not in HALFSHIFT_DIRECTION:
        raise ValueError("k must be 1, 2 or 3")
    if isinstance(x, (int, Fraction, str)):
        xq = Fraction(x)
        if not xq > Fraction(-1, 2):
            raise DomainError("x must exceed -1/2")
        return OneSidedBound(ctx.real(halfshift_bound_exact(k, xq)), HALFSHIFT_DIRECTION[k], k)
    xv = ctx.real(x)
    if not xv > -0.5:
        raise DomainError("x must exceed -1/2")
    x2 = xv * xv
    d = 560 * x2 * x2 + 520 * x2 + 27
    if k == 1:
        val = 20 * xv * (84 * x2 + 71) / (1680 * x2 * x2 + 1560 * x2 + 81)
    elif k == 2:
        val = -ctx.mp.mpf(20) / 3 * (47040 * x2**3 + 75600 * x2**2 + 30116 * x2 - 1917) / d**2
    else:
        num = 6585600 * x2**4 + 15052800 * x2**3 + 11696160 * x2**2 + 1820960 * x2 - 701703
        val = ctx.mp.mpf(160) / 3 * xv * num / d**3
    return OneSidedBound(val, HALFSHIFT_DIRECTION[k], k)


def baseline_bounds(x, which: Baseline, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Enclosure:
    """Earlier logarithmic bounds, kept for width comparison."""
    xv = _positive_x(x, ctx)
    mp = ctx.mp
    g = euler_gamma(ctx)
    which = Baseline(which)
    if which is Baseline.BATIR:
        return Enclosure(mp.log(xv + mp.mpf(1) / 2), mp.log(xv + mp.exp(-g)), Target.PSI,
                         (Theorem.BASELINE_BATIR,), x, hi_strict=False)
    q = xv * xv + xv
    return Enclosure(mp.log(q + mp.exp(-2 * g)) / 2, mp.log(q + mp.mpf(1) / 3) / 2,
                     Target.PSI, (Theorem.BASELINE_HE,), x, lo_strict=False)
