"""Sequences converging to Euler's constant and their error behaviour.

``l_n(a) = H_n - L(n, a)`` is the parametric family; the others are earlier
sequences kept for comparison.  Harmonic numbers are exact rationals, so the
only rounding comes from the logarithms and exponentials.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .approximant import A1, A_INFINITY, ParamA, L
from .numcore import DEFAULT_CONTEXT, PrecisionContext
from .oracle import euler_gamma, harmonic_real


class SeqTag(enum.Enum):
    L_OF_A = "l"
    SIGMA = "sigma"
    THETA = "theta"
    TAU = "tau"
    DELTA = "delta"
    U = "u"
    V = "v"
    ALPHA = "alpha"
    DETEMPLE = "detemple"
    TOTH = "toth"
    MU = "mu"
    CLASSICAL = "classical"


# u, v, delta use H_0 = 0 at n = 1
MIN_N = {SeqTag.ALPHA: 3}

# error ~ C n^-p
NOMINAL_ORDER = {
    SeqTag.CLASSICAL: 1, SeqTag.DETEMPLE: 2, SeqTag.TOTH: 3, SeqTag.MU: 3,
    SeqTag.U: 3, SeqTag.V: 3, SeqTag.DELTA: 4, SeqTag.ALPHA: 4,
    SeqTag.SIGMA: 4, SeqTag.THETA: 4, SeqTag.TAU: 5,
}


class PrecisionGuardError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SequenceId:
    tag: SeqTag
    a: ParamA | None = None

    def __post_init__(self):
        if self.tag is SeqTag.L_OF_A and self.a is None:
            raise ValueError("l_n(a) needs a parameter a")

    @classmethod
    def parse(cls, text: str) -> SequenceId:
        """``sigma``, ``tau``, ... or ``l:<a>`` with a decimal, p/q or a1/a0/inf."""
        t = text.strip().lower()
        if t.startswith("l:"):
            return cls(SeqTag.L_OF_A, ParamA.parse(t[2:]))
        try:
            return cls(SeqTag(t))
        except ValueError:
            raise ValueError(f"unknown sequence {text!r}") from None

    @property
    def label(self) -> str:
        if self.tag is SeqTag.L_OF_A:
            return f"l({self.a.label()})"
        return self.tag.value

    @property
    def nominal_order(self) -> int:
        if self.tag is SeqTag.L_OF_A:
            return 8 if self.a == A1 else (4 if self.a.is_infinite else 6)
        return NOMINAL_ORDER[self.tag]


def L_OF_A(a) -> SequenceId:
    return SequenceId(SeqTag.L_OF_A, ParamA.parse(a) if isinstance(a, str) else ParamA.of(a))


SIGMA = SequenceId(SeqTag.SIGMA)
TAU = SequenceId(SeqTag.TAU)
DELTA = SequenceId(SeqTag.DELTA)

DEFAULT_TABLE_IDS = (DELTA, TAU, SequenceId(SeqTag.L_OF_A, A1),
                   SequenceId(SeqTag.L_OF_A, ParamA(Fraction(1, 2))))
DEFAULT_TABLE_NS = (1, 2, 5, 10, 50, 100, 200, 500)


@dataclass(frozen=True)
class SequenceSample:
    n: int
    value: object
    error: object
    abs_error: object


@dataclass(frozen=True)
class OrderEstimate:
    n: int
    p_hat: float


def _u(n, ctx):
    mp = ctx.mp
    r6 = mp.sqrt(6)
    return harmonic_real(n - 1, ctx) + 1 / ((6 - 2 * r6) * n) - mp.log(n + 1 / r6)


def _v(n, ctx):
    mp = ctx.mp
    r6 = mp.sqrt(6)
    return harmonic_real(n - 1, ctx) + 1 / ((6 + 2 * r6) * n) - mp.log(n - 1 / r6)


def _theta(n, ctx):
    mp = ctx.mp
    return harmonic_real(n, ctx) + mp.log(mp.expm1(mp.mpf(2) / (n + 1)) / (2 * n + 2)) / 2


def _sigma(n, ctx):
    mp = ctx.mp
    return harmonic_real(n, ctx) - mp.log(n * n + n + mp.mpf(1) / 3) / 2


def _tau(n, ctx):
    mp = ctx.mp
    cubic = 2 * mp.mpf(n) ** 3 + 4 * n * n + mp.mpf(8) * n / 3 + mp.mpf(2) / 3
    return harmonic_real(n, ctx) + mp.log(mp.expm1(mp.mpf(2) / (n + 1)) / cubic) / 4


def sequence_raw(sid: SequenceId, n: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Value of the sequence at n (no error bookkeeping)."""
    if int(n) != n or n < MIN_N.get(sid.tag, 1):
        raise ValueError(f"{sid.label} is defined for n >= {MIN_N.get(sid.tag, 1)}")
    n = int(n)
    mp = ctx.mp
    tag = sid.tag
    if tag is SeqTag.L_OF_A:
        return harmonic_real(n, ctx) - L(n, sid.a, ctx)
    if tag is SeqTag.SIGMA:
        return _sigma(n, ctx)
    if tag is SeqTag.THETA:
        return _theta(n, ctx)
    if tag is SeqTag.TAU:
        return _tau(n, ctx)
    if tag is SeqTag.U:
        return _u(n, ctx)
    if tag is SeqTag.V:
        return _v(n, ctx)
    if tag is SeqTag.DELTA:
        return (_u(n, ctx) + _v(n, ctx)) / 2
    if tag is SeqTag.ALPHA:
        return (harmonic_real(n - 2, ctx) + mp.mpf(23) / (24 * (n - 1))
                + mp.mpf(1) / (24 * n) - mp.log(n - mp.mpf(1) / 2))
    if tag is SeqTag.DETEMPLE:
        return harmonic_real(n, ctx) - mp.log(n + mp.mpf(1) / 2)
    if tag is SeqTag.TOTH:
        return harmonic_real(n, ctx) - mp.log(n + mp.mpf(1) / 2 + mp.mpf(1) / (24 * n))
    if tag is SeqTag.MU:
        return harmonic_real(n, ctx) + mp.log(mp.expm1(mp.mpf(1) / (n + 1)) / (n + mp.mpf(1) / 2)) / 2
    if tag is SeqTag.CLASSICAL:
        return harmonic_real(n, ctx) - mp.log(n)
    raise AssertionError(tag)


def seq_value(sid: SequenceId, n: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> SequenceSample:
    value = sequence_raw(sid, n, ctx)
    err = value - euler_gamma(ctx)
    return SequenceSample(int(n), value, err, abs(err))


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


def format_sig(value, sig: int = 5) -> str:
    """Scientific notation rounded half-even to ``sig`` significant digits."""
    from decimal import ROUND_HALF_EVEN, Context, Decimal

    if value == 0:
        return "0"
    d = Decimal(str(value))
    q = Context(prec=sig, rounding=ROUND_HALF_EVEN).plus(d)
    return f"{q:.{sig - 1}e}"


def full_precision(value, ctx: PrecisionContext) -> str:
    return ctx.mp.nstr(value, ctx.digits)


@dataclass(frozen=True)
class ErrorTable:
    ids: tuple[SequenceId, ...]
    ns: tuple[int, ...]
    cells: tuple[tuple[object, ...], ...]  # cells[row n][column id] = |error|
    digits: int

    def display(self, sig: int = 5) -> list[list[str]]:
        return [[format_sig(v, sig) for v in row] for row in self.cells]


def error_table(ids, ns, ctx: PrecisionContext = DEFAULT_CONTEXT) -> ErrorTable:
    ids = tuple(ids)
    ns = tuple(int(n) for n in ns)
    cells = tuple(tuple(seq_value(sid, n, ctx).abs_error for sid in ids) for n in ns)
    return ErrorTable(ids, ns, cells, ctx.digits)


# ---------------------------------------------------------------------------
# asymptotics
# ---------------------------------------------------------------------------


def limit_constant(a, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """lim n^6 (l_n(a) - gamma) = -(315a^2 - 240a - 7) / (85050 a).

    Equivalently -(a - a1)(a - a2) / (270 a).  The quadratic has rational
    coefficients, so rational a gives an exact Fraction and a = a1 gives 0.
    """
    a = ParamA.of(a)
    if a.is_infinite:
        raise ValueError("limit constant needs a finite a")
    if a == A1:
        return Fraction(0)
    av = a.exact
    if av is None:
        av = a.resolve(ctx)
    return -(315 * av * av - 240 * av - 7) / (85050 * av)


def printed_limit_constant(a):
    """The n^-6 constant as it appears in print, -(a - a1)(a - a2)/(85050 a).

    It is smaller than the true limit by a factor 315; kept for comparison.
    """
    av = Fraction(a)
    return -(av * av - Fraction(16, 21) * av - Fraction(1, 45)) / (85050 * av)


class ScaledLimit(enum.Enum):
    L6 = "l6"
    L8_A1 = "l8_a1"
    SIGMA4 = "sigma4"
    TAU5 = "tau5"


def scaled_limit_check(kind: ScaledLimit, n: int, ctx: PrecisionContext = DEFAULT_CONTEXT,
                       a=Fraction(1, 2)):
    """(n^p * error at n, closed-form limit) for one of the rate claims."""
    kind = ScaledLimit(kind)
    if kind is ScaledLimit.L6:
        sid, p, target = L_OF_A(a), 6, ctx.real(limit_constant(a, ctx))
    elif kind is ScaledLimit.L8_A1:
        sid, p, target = SequenceId(SeqTag.L_OF_A, A1), 8, ctx.real(Fraction(-2, 1225))
    elif kind is ScaledLimit.SIGMA4:
        sid, p, target = SIGMA, 4, ctx.real(Fraction(-1, 180))
    else:
        sid, p, target = TAU, 5, ctx.real(Fraction(-1, 180))
    err = seq_value(sid, n, ctx).error
    _guard(err, ctx)
    return ctx.mp.mpf(n) ** p * err, target


def _guard(err, ctx):
    if abs(err) <= ctx.mp.mpf(10) ** (-ctx.digits + 10):
        raise PrecisionGuardError("increase precision or decrease n")


def order_estimate(sid: SequenceId, n: int, ctx: PrecisionContext = DEFAULT_CONTEXT) -> OrderEstimate:
    """Empirical order log2(|e_n| / |e_2n|)."""
    e1 = seq_value(sid, n, ctx).abs_error
    e2 = seq_value(sid, 2 * n, ctx).abs_error
    for e in (e1, e2):
        if e == 0:
            raise PrecisionGuardError("error vanishes at working precision; increase precision")
        _guard(e, ctx)
    return OrderEstimate(int(n), float(ctx.mp.log(e1 / e2, 2)))


def sigma_is_l_infinity(n: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    return sequence_raw(SIGMA, n, ctx) - sequence_raw(SequenceId(SeqTag.L_OF_A, A_INFINITY), n, ctx)


def tau_average_gap(n: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """tau_n - (theta_n + sigma_n)/2, zero up to rounding."""
    return _tau(n, ctx) - (_theta(n, ctx) + _sigma(n, ctx)) / 2


def required_digits(order: int, n_max: int) -> int:
    """Digits that keep an n^-order error clear of cancellation noise."""
    return 6 + math.ceil(order * math.log10(max(n_max, 2))) + 10
