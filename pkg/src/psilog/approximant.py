"""The two-logarithm approximant L(x, a) to psi(x+1) and its distinguished parameters.

    L(x, a) = w1 ln(x^2 + x + (3a+1)/3) + w2 ln(x^2 + x + (15a-1)/(45a)),
    w1 = 1/(90a^2 + 2),  w2 = 45a^2/(90a^2 + 2)

As a -> infinity this tends to (1/2) ln(x^2 + x + 1/3); that limit is the
parameter value :data:`A_INFINITY`.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction

from .numcore import DEFAULT_CONTEXT, PrecisionContext, as_fraction
from .oracle import DomainError, euler_gamma, polygamma

ONE_FIFTEENTH = Fraction(1, 15)
FOUR_FIFTEENTHS = Fraction(4, 15)

# named parameters that are resolved against the solved thresholds
THRESHOLD_NAMES = ("a1", "a2", "a0", "a0p", "a0pp")


class RootBracketError(ArithmeticError):
    pass


class Regime(enum.Enum):
    BELOW_A0PP = "a < a0''"
    A0PP_TO_A0P = "a0'' <= a <= a0'"
    A0P_TO_A0 = "a0' < a <= a0"
    A0_TO_A1 = "a0 < a < a1"
    AT_LEAST_A1 = "a >= a1"


@dataclass(frozen=True)
class ParamA:
    """Approximant parameter.

    Exactly one of ``value`` (a rational or an mpf) and ``name`` is set.
    ``name`` is ``"inf"`` for the a -> infinity limit or one of the threshold
    names, which are resolved at the precision of the evaluating context.
    """

    value: object = None
    name: str | None = None

    def __post_init__(self):
        if self.name is not None:
            if self.value is not None:
                raise ValueError("ParamA takes a value or a name, not both")
            if self.name != "inf" and self.name not in THRESHOLD_NAMES:
                raise ValueError(f"unknown parameter name {self.name!r}")
            if self.name == "a2":
                raise ValueError("a2 is negative and not a valid parameter")
            return
        if self.value is None:
            raise ValueError("ParamA needs a value or a name")
        v = self.value
        if isinstance(v, (int, str)):
            v = as_fraction(v)
            object.__setattr__(self, "value", v)
        if not 15 * v > 1:
            raise DomainError("outside (x,a) domain: a must exceed 1/15")

    @classmethod
    def of(cls, a) -> ParamA:
        if isinstance(a, ParamA):
            return a
        return cls(value=a)

    @classmethod
    def parse(cls, text: str) -> ParamA:
        """Decimal, ``p/q`` or one of ``a1 a0 a0p a0pp inf``."""
        t = text.strip().lower()
        if t in ("inf", "infinity", "oo"):
            return A_INFINITY
        if t in THRESHOLD_NAMES:
            return cls(name=t)
        try:
            v = Fraction(t)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse parameter a from {text!r}") from None
        return cls(value=v)

    @property
    def is_infinite(self) -> bool:
        return self.name == "inf"

    @property
    def exact(self) -> Fraction | None:
        return self.value if isinstance(self.value, Fraction) else None

    def resolve(self, ctx: PrecisionContext = DEFAULT_CONTEXT):
        """Numeric value at ``ctx`` precision; ``None`` for infinity."""
        if self.is_infinite:
            return None
        if self.name is not None:
            th = thresholds(ctx)
            return {"a1": th.a1, "a0": th.a0, "a0p": th.a0_prime,
                    "a0pp": th.a0_double_prime}[self.name]
        return ctx.real(self.value)

    def regime(self, ctx: PrecisionContext = DEFAULT_CONTEXT) -> Regime:
        if self.is_infinite:
            return Regime.AT_LEAST_A1
        th = thresholds(ctx)
        named = {"a1": Regime.AT_LEAST_A1, "a0": Regime.A0P_TO_A0,
                 "a0p": Regime.A0PP_TO_A0P, "a0pp": Regime.A0PP_TO_A0P}
        if self.name in named:
            return named[self.name]
        a = self.resolve(ctx)
        if a < th.a0_double_prime:
            return Regime.BELOW_A0PP
        if a <= th.a0_prime:
            return Regime.A0PP_TO_A0P
        if a <= th.a0:
            return Regime.A0P_TO_A0
        if a < th.a1:
            return Regime.A0_TO_A1
        return Regime.AT_LEAST_A1

    def label(self) -> str:
        if self.name is not None:
            return self.name
        return str(self.value)


A_INFINITY = ParamA(name="inf")
A1 = ParamA(name="a1")
A0 = ParamA(name="a0")
A0P = ParamA(name="a0p")
A0PP = ParamA(name="a0pp")


def _terms(a: ParamA, ctx: PrecisionContext):
    """[(weight, shift)] so that L = sum w * ln(x^2 + x + shift)."""
    if a.is_infinite:
        return [(ctx.mp.mpf(1) / 2, ctx.mp.mpf(1) / 3)]
    q = a.exact
    if q is not None:
        w1 = 1 / (90 * q * q + 2)
        pairs = [(w1, (3 * q + 1) / 3), (45 * q * q * w1, (15 * q - 1) / (45 * q))]
        return [(ctx.real(w), ctx.real(c)) for w, c in pairs]
    av = a.resolve(ctx)
    w1 = 1 / (90 * av * av + 2)
    return [(w1, (3 * av + 1) / 3), (45 * av * av * w1, (15 * av - 1) / (45 * av))]


def _check_domain(x, a: ParamA, ctx: PrecisionContext):
    x = ctx.real(x)
    if a.is_infinite:
        wide = True
    else:
        av = a.resolve(ctx) if a.exact is None else a.exact
        wide = 15 * av > 4
    # x = 0 is the continuous endpoint of the x > 0 branch
    if not (x > -1 if wide else x >= 0):
        raise DomainError(f"outside (x,a) domain: x={x}, a={a.label()}")
    return x


def _quadratics(x, a, ctx):
    out = []
    for i, (w, c) in enumerate(_terms(a, ctx)):
        qv = x * x + x + c
        if qv <= 0:
            raise DomainError(
                f"non-positive logarithm argument x^2+x+{ctx.mp.nstr(c, 8)} "
                f"(factor {i + 1}) at x={ctx.mp.nstr(x, 8)}")
        out.append((w, qv))
    return out


def L(x, a, ctx: PrecisionContext = DEFAULT_CONTEXT):
    a = ParamA.of(a)
    x = _check_domain(x, a, ctx)
    return ctx.mp.fsum(w * ctx.mp.log(q) for w, q in _quadratics(x, a, ctx))


def L_partial_x(order: int, x, a, ctx: PrecisionContext = DEFAULT_CONTEXT):
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    a = ParamA.of(a)
    x = _check_domain(x, a, ctx)
    s = 2 * x + 1
    parts = []
    for w, q in _quadratics(x, a, ctx):
        if order == 1:
            parts.append(w * s / q)
        elif order == 2:
            parts.append(w * (2 * q - s * s) / (q * q))
        else:
            parts.append(w * 2 * s * (s * s - 3 * q) / q**3)
    return ctx.mp.fsum(parts)


def L_partial_a(x, a, ctx: PrecisionContext = DEFAULT_CONTEXT):
    a = ParamA.of(a)
    if a.is_infinite:
        raise DomainError("outside (x,a) domain: dL/da needs a finite a")
    x = _check_domain(x, a, ctx)
    (_, qa), (_, qb) = _quadratics(x, a, ctx)
    av = a.resolve(ctx)
    mp = ctx.mp
    k = 45 * av / (45 * av * av + 1) ** 2
    w = 1 / (90 * av * av + 2)
    return k * mp.log(qb / qa) + w / qa + w / qb


def weights_exact(a) -> tuple[Fraction, Fraction]:
    a = as_fraction(a)
    return Fraction(1) / (90 * a * a + 2), 45 * a * a / (90 * a * a + 2)


# ---------------------------------------------------------------------------
# thresholds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdSet:
    a1: object
    a2: object
    a0_prime: object
    a0: object
    a0_double_prime: object
    a0_tolerance: object
    a0_double_prime_tolerance: object
    a0_bracket: tuple[Fraction, Fraction] = (Fraction(1, 2), Fraction(3, 5))
    a0_double_prime_bracket: tuple[Fraction, Fraction] = (Fraction(1, 3), Fraction(1, 2))

    def ordered(self) -> bool:
        return self.a0_double_prime < self.a0_prime < self.a0 < self.a1


def solve_bracketed(f, lo, hi, ctx: PrecisionContext, tol=None):
    """Root of ``f`` in ``[lo, hi]`` by Illinois false position, bisection guarded.

    Returns ``(root, width)`` where ``width`` is the final bracket width.
    """
    mp = ctx.mp
    lo, hi = ctx.real(lo), ctx.real(hi)
    tol = tol if tol is not None else mp.mpf(10) ** (-ctx.digits)
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo, mp.mpf(0)
    if fhi == 0:
        return hi, mp.mpf(0)
    if (flo > 0) == (fhi > 0):
        raise RootBracketError("root bracketing failed")
    side = 0
    for it in range(2000):
        width = hi - lo
        if width < tol:
            break
        if it % 4 == 3:
            m = (lo + hi) / 2
        else:
            m = (lo * fhi - hi * flo) / (fhi - flo)
            if not lo < m < hi:
                m = (lo + hi) / 2
        fm = f(m)
        if fm == 0:
            return m, hi - lo
        if (fm > 0) == (flo > 0):
            lo, flo = m, fm
            if side == -1:
                fhi /= 2
            side = -1
        else:
            hi, fhi = m, fm
            if side == 1:
                flo /= 2
            side = 1
    else:
        raise RootBracketError("root bracketing failed: no convergence")
    return (lo + hi) / 2, hi - lo


_th_cache: dict[tuple[int, int], ThresholdSet] = {}
_x0_cache: dict[tuple[int, int], tuple] = {}
_cache_lock = threading.Lock()


def a1_exact_parts() -> tuple[Fraction, Fraction]:
    """a1 = u + v*sqrt(205)."""
    return Fraction(40, 105), Fraction(3, 105)


def thresholds(ctx: PrecisionContext = DEFAULT_CONTEXT) -> ThresholdSet:
    key = ctx.key()
    if key in _th_cache:
        return _th_cache[key]
    mp = ctx.mp
    r205 = mp.sqrt(205)
    a1 = (40 + 3 * r205) / 105
    a2 = (40 - 3 * r205) / 105
    pi2 = mp.pi**2
    a0p = (45 - 4 * pi2 + 3 * mp.sqrt(4 * pi2**2 - 80 * pi2 + 405)) / (30 * (pi2 - 9))

    psi1 = polygamma(0, 1, ctx)
    a0, tol0 = solve_bracketed(lambda a: psi1 - L(0, ParamA(value=a), ctx),
                               Fraction(1, 2), Fraction(3, 5), ctx)
    psi2_1 = polygamma(2, 1, ctx)
    a0pp, tol2 = solve_bracketed(
        lambda a: psi2_1 - L_partial_x(2, 0, ParamA(value=a), ctx),
        Fraction(1, 3), Fraction(1, 2), ctx)
    th = ThresholdSet(a1=a1, a2=a2, a0_prime=a0p, a0=a0, a0_double_prime=a0pp,
                      a0_tolerance=tol0, a0_double_prime_tolerance=tol2)
    with _cache_lock:
        return _th_cache.setdefault(key, th)


def c0(a, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Offset constant L(0, a) + gamma."""
    a = ParamA.of(a)
    g = euler_gamma(ctx)
    if a.is_infinite:
        return g - ctx.mp.log(3) / 2
    return L(0, a, ctx) + g


def c1(a, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Offset constant 1 - L(1, a)."""
    return 1 - L(1, ParamA.of(a), ctx)


def residual0(x, a, ctx):
    return polygamma(0, ctx.real(x) + 1, ctx) - L(x, a, ctx)


def solve_x0(ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Peak location x0 of psi(x+1) - L(x, a0) on (0, 1/5) and the peak value."""
    key = ctx.key()
    if key not in _x0_cache:
        def dF(x):
            return polygamma(1, x + 1, ctx) - L_partial_x(1, x, A0, ctx)

        x0, _ = solve_bracketed(dF, 0, Fraction(1, 5), ctx)
        with _cache_lock:
            _x0_cache.setdefault(key, (x0, residual0(x0, A0, ctx)))
    return _x0_cache[key]
