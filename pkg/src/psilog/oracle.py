"""Reference values for psi and its first three derivatives.

The evaluation shifts the argument upward with the recurrence
``psi^(k)(x+1) = psi^(k)(x) + (-1)^k k! / x^(k+1)`` until it clears the
shift threshold, then sums the (divergent) Bernoulli asymptotic series,
stopping once the next term is below the error budget.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .numcore import DEFAULT_CONTEXT, PrecisionContext

MAX_ORDER = 3


class InsufficientPrecisionError(ArithmeticError):
    pass


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    shift_threshold: float = 30.0
    series_terms: int | None = None

    def __post_init__(self):
        if self.shift_threshold < 10:
            raise ValueError("shift_threshold must be >= 10")
        if self.series_terms is not None and self.series_terms < 1:
            raise ValueError("series_terms must be positive")

    @classmethod
    def for_context(cls, ctx: PrecisionContext) -> OracleConfig:
        # smallest asymptotic term at z is about 2*exp(-2*pi*z); keep it
        # below 10**-(working+5)
        need = (ctx.working_digits + 5) * math.log(10) / (2 * math.pi) + 2
        return cls(shift_threshold=max(30.0, float(math.ceil(need))))


# ---------------------------------------------------------------------------
# Bernoulli numbers
# ---------------------------------------------------------------------------

_bern_lock = threading.Lock()
_bern: list[Fraction] = [Fraction(1)]  # B_0, B_1, ... with B_1 = -1/2


def bernoulli(m: int) -> Fraction:
    """Exact Bernoulli number B_m (B_1 = -1/2)."""
    if m < len(_bern):
        return _bern[m]
    with _bern_lock:
        # sum_{j=0}^{n} C(n+1, j) B_j = 0
        table = list(_bern)
        for n in range(len(table), m + 1):
            s = Fraction(0)
            c = 1  # C(n+1, j)
            for j in range(n):
                s += c * table[j]
                c = c * (n + 1 - j) // (j + 1)
            table.append(-s / (n + 1))
        if len(table) > len(_bern):
            _bern[:] = table
    return _bern[m]


# ---------------------------------------------------------------------------
# harmonic numbers
# ---------------------------------------------------------------------------


def _harmonic_split(a: int, b: int) -> tuple[int, int]:
    """(p, q) with p/q = sum_{k=a}^{b-1} 1/k, unreduced."""
    if b - a == 1:
        return 1, a
    if b - a < 16:
        p, q = 0, 1
        for k in range(a, b):
            p, q = p * k + q, q * k
        return p, q
    m = (a + b) // 2
    p1, q1 = _harmonic_split(a, m)
    p2, q2 = _harmonic_split(m, b)
    return p1 * q2 + p2 * q1, q1 * q2


@lru_cache(maxsize=4096)
def harmonic(n: int) -> Fraction:
    """Exact harmonic number H_n = 1 + 1/2 + ... + 1/n."""
    if int(n) != n or n < 1:
        raise ValueError("n must be positive")
    p, q = _harmonic_split(1, int(n) + 1)
    return Fraction(p, q)


EXACT_HARMONIC_LIMIT = 50_000


def harmonic_real(n: int, ctx: PrecisionContext = DEFAULT_CONTEXT):
    """H_n as a real at context precision (exact rational for moderate n)."""
    if n == 0:
        return ctx.mp.mpf(0)
    if n <= EXACT_HARMONIC_LIMIT:
        return ctx.real(harmonic(n))
    mp = ctx.mp
    with mp.extradps(int(math.log10(n)) + 2):
        s = mp.fsum(mp.mpf(1) / k for k in range(1, n + 1))
    return +s


# ---------------------------------------------------------------------------
# polygamma
# ---------------------------------------------------------------------------


def _check_order(k: int) -> int:
    if k not in range(MAX_ORDER + 1):
        raise ValueError(f"polygamma order must be in 0..{MAX_ORDER}, got {k}")
    return k


def _asymptotic(k: int, z, ctx: PrecisionContext, config: OracleConfig):
    mp = ctx.mp
    tol = mp.mpf(10) ** (-(ctx.working_digits + 5))
    z = mp.mpf(z)
    if k == 0:
        head = mp.log(z) - 1 / (2 * z)
    else:
        kf = math.factorial(k)
        head = math.factorial(k - 1) / z**k + kf / (2 * z ** (k + 1))
    inv_z2 = 1 / (z * z)
    zpow = z ** (-k) if k else mp.mpf(1)
    total = mp.mpf(0)
    prev = None
    j = 1
    while True:
        zpow *= inv_z2
        b = bernoulli(2 * j)
        if k == 0:
            coef = b / (2 * j)
        else:
            coef = b * Fraction(math.factorial(2 * j + k - 1), math.factorial(2 * j))
        term = ctx.real(coef) * zpow
        mag = abs(term)
        if config.series_terms is not None and j > config.series_terms:
            if mag >= tol:
                raise InsufficientPrecisionError("insufficient precision budget")
            break
        if config.series_terms is None:
            if mag < tol:
                break
            if prev is not None and mag > prev:
                raise InsufficientPrecisionError("insufficient precision budget")
        total += term
        prev = mag
        j += 1
    if k == 0:
        return head - total
    return (-1) ** (k + 1) * (head + total)


def polygamma(k: int, x, ctx: PrecisionContext = DEFAULT_CONTEXT,
              config: OracleConfig | None = None):
    """psi^(k)(x) for k in 0..3 and real x > 0, at ``ctx`` precision."""
    _check_order(k)
    mp = ctx.mp
    x = ctx.real(x)
    if x <= 0:
        raise DomainError("pole/branch region: polygamma needs x > 0")
    config = config or OracleConfig.for_context(ctx)
    n_shift = max(0, math.ceil(config.shift_threshold - float(x)))
    value = _asymptotic(k, x + n_shift, ctx, config)
    if n_shift:
        kf = math.factorial(k)
        corr = mp.fsum(1 / (x + j) ** (k + 1) for j in range(n_shift))
        value -= (-1) ** k * kf * corr
    return value


def psi(x, ctx: PrecisionContext = DEFAULT_CONTEXT):
    return polygamma(0, x, ctx)


_gamma_cache: dict[tuple[int, int], object] = {}
_gamma_lock = threading.Lock()


def euler_gamma(ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Euler's constant as H_N - psi(N+1), psi from the asymptotic series only."""
    key = ctx.key()
    if key not in _gamma_cache:
        config = OracleConfig.for_context(ctx)
        n = math.ceil(config.shift_threshold)
        g = ctx.real(harmonic(n)) - _asymptotic(0, n + 1, ctx, config)
        with _gamma_lock:
            _gamma_cache.setdefault(key, g)
    return _gamma_cache[key]


def zeta3(ctx: PrecisionContext = DEFAULT_CONTEXT):
    """Apery's constant via psi''(1) = -2 zeta(3)."""
    return -polygamma(2, 1, ctx) / 2


def oracle_eps(ctx: PrecisionContext, scale=1):
    """Absolute error budget for a value of magnitude ``scale``."""
    return ctx.eps * max(1, abs(scale))
