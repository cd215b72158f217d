"""Exact rational polynomials, Sturm root counting and the precision contract.

Everything polynomial here is done over :class:`fractions.Fraction`, so a
positivity certificate produced by :func:`certify_positive` does not depend on
any floating point evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

import mpmath

BigRational = Fraction
Bound = Union[Fraction, int, float, None]  # +/-inf allowed for interval ends

INF = math.inf


class DegeneratePolynomialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# precision
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision for real-valued evaluation.

    ``digits`` is the number of significant decimal digits promised to the
    caller; the arithmetic itself runs with ``digits + guard_digits``.
    Each context owns a private mpmath context, so two contexts never share
    mutable precision state.
    """

    digits: int = 50
    guard_digits: int = 10
    mp: mpmath.ctx_mp.MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.digits) != self.digits or self.digits < 16:
            raise ValueError("digits must be an integer >= 16")
        if self.guard_digits < 0:
            raise ValueError("guard_digits must be non-negative")
        ctx = mpmath.MPContext()
        ctx.dps = self.working_digits
        object.__setattr__(self, "mp", ctx)

    @property
    def working_digits(self) -> int:
        return self.digits + self.guard_digits

    @property
    def eps(self):
        """Oracle error budget: results are trusted to 10**-digits."""
        return self.mp.mpf(10) ** (-self.digits)

    def real(self, value):
        """Convert ints, Fractions, decimal strings and mpfs to this context."""
        mp = self.mp
        if isinstance(value, Fraction):
            return mp.mpf(value.numerator) / value.denominator
        if isinstance(value, str) and "/" in value:
            return self.real(Fraction(value))
        return mp.mpf(value)

    def key(self) -> tuple[int, int]:
        return (self.digits, self.guard_digits)


DEFAULT_CONTEXT = PrecisionContext()


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    raise TypeError(f"cannot make an exact rational from {type(value).__name__}")


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class RationalPolynomial:
    """Univariate polynomial with exact rational coefficients (ascending)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def from_descending(cls, coeffs: Iterable) -> RationalPolynomial:
        return cls(list(coeffs)[::-1])

    @classmethod
    def monomial(cls, degree: int, c=1) -> RationalPolynomial:
        return cls([0] * degree + [c])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, t):
        return poly_eval_exact(self, t)

    def __eq__(self, other):
        if not isinstance(other, RationalPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RationalPolynomial({[str(c) for c in self.coeffs]})"

    def __neg__(self):
        return RationalPolynomial(-c for c in self.coeffs)

    def __add__(self, other):
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        if self.is_zero() or other.is_zero():
            return RationalPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = RationalPolynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other: RationalPolynomial):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.leading
        quot = [Fraction(0)] * max(len(rem) - dq, 1)
        while len(rem) - 1 >= dq and any(rem):
            shift = len(rem) - 1 - dq
            c = rem[-1] / lead
            quot[shift] = c
            for j, b in enumerate(other.coeffs):
                rem[shift + j] -= c * b
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return RationalPolynomial(quot), RationalPolynomial(rem)

    def compose(self, inner: RationalPolynomial) -> RationalPolynomial:
        """self(inner(t)) by Horner's scheme."""
        out = RationalPolynomial()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def shift(self, h) -> RationalPolynomial:
        """Polynomial in t equal to self(t + h)."""
        return self.compose(RationalPolynomial([as_fraction(h), 1]))

    def eval_real(self, x, ctx: PrecisionContext):
        mp = ctx.mp
        acc = mp.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + ctx.real(c)
        return acc


def _lift(p) -> RationalPolynomial:
    if isinstance(p, RationalPolynomial):
        return p
    return RationalPolynomial([p])


def poly_eval_exact(p: RationalPolynomial, t) -> Fraction:
    t = as_fraction(t)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * t + c
    return acc


def poly_derivative(p: RationalPolynomial, order: int = 1) -> RationalPolynomial:
    for _ in range(order):
        p = RationalPolynomial(i * c for i, c in enumerate(p.coeffs) if i)
    return p


def poly_gcd(p: RationalPolynomial, q: RationalPolynomial) -> RationalPolynomial:
    while not q.is_zero():
        p, q = q, p.divmod(q)[1]
    if p.is_zero():
        return p
    return RationalPolynomial(c / p.leading for c in p.coeffs)


# ---------------------------------------------------------------------------
# Sturm sequences
# ---------------------------------------------------------------------------


def square_free(p: RationalPolynomial) -> RationalPolynomial:
    """p / gcd(p, p'): same distinct roots, all simple."""
    g = poly_gcd(p, poly_derivative(p))
    return p if g.degree <= 0 else p.divmod(g)[0]


def sturm_sequence(p: RationalPolynomial) -> list[RationalPolynomial]:
    """Sturm sequence of the square-free part of ``p``.

    Using the square-free part keeps the variation count valid when an
    evaluation point is a multiple root of ``p``.
    """
    if p.is_zero():
        raise DegeneratePolynomialError("degenerate polynomial")
    p = square_free(p)
    seq = [p, poly_derivative(p)]
    while not seq[-1].is_zero():
        seq.append(-seq[-2].divmod(seq[-1])[1])
    seq.pop()
    return seq


def cauchy_bound(p: RationalPolynomial) -> Fraction:
    """Every real root of p lies strictly inside (-B, B)."""
    if p.degree < 1:
        return Fraction(1)
    lead = abs(p.leading)
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lead


def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


def _sign_at_infinity(q: RationalPolynomial, direction: int) -> int:
    s = _sign(q.leading)
    if direction < 0 and q.degree % 2:
        s = -s
    return s


def _variations(signs: Sequence[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _variations_at(seq, point) -> int:
    if point == INF or point == -INF:
        d = 1 if point > 0 else -1
        return _variations([_sign_at_infinity(q, d) for q in seq])
    return _variations([_sign(poly_eval_exact(q, point)) for q in seq])


def _normalise_bound(b):
    if b is None:
        return None
    if isinstance(b, float) and math.isinf(b):
        return b
    return as_fraction(b)


def count_real_roots(p: RationalPolynomial, lo=-INF, hi=INF) -> int:
    """Number of distinct real roots of ``p`` in ``(lo, hi]``.

    ``lo``/``hi`` may be ``-inf``/``+inf``; unbounded ends are replaced by the
    Cauchy root bound, which brackets every real root.
    """
    if p.is_zero():
        raise DegeneratePolynomialError("degenerate polynomial")
    lo, hi = _normalise_bound(lo), _normalise_bound(hi)
    if p.degree == 0:
        return 0
    bound = cauchy_bound(p)
    if lo == -INF:
        lo = -bound
    if hi == INF:
        hi = bound
    if lo >= hi:
        return 0
    seq = sturm_sequence(p)
    return _variations_at(seq, lo) - _variations_at(seq, hi)


def count_roots_open(p: RationalPolynomial, lo=-INF, hi=INF) -> int:
    """Distinct real roots in the open interval ``(lo, hi)``."""
    n = count_real_roots(p, lo, hi)
    hi = _normalise_bound(hi)
    if n and hi not in (INF, -INF) and poly_eval_exact(p, hi) == 0:
        n -= 1
    return n


def isolate_roots(p: RationalPolynomial, lo=-INF, hi=INF, width=Fraction(1, 10**12)):
    """Disjoint intervals ``(l, r]`` each holding exactly one root of p."""
    if p.is_zero():
        raise DegeneratePolynomialError("degenerate polynomial")
    bound = cauchy_bound(p)
    lo = -bound if _normalise_bound(lo) == -INF else _normalise_bound(lo)
    hi = bound if _normalise_bound(hi) == INF else _normalise_bound(hi)
    seq = sturm_sequence(p)
    out = []
    stack = [(lo, hi, _variations_at(seq, lo), _variations_at(seq, hi))]
    while stack:
        l, r, vl, vr = stack.pop()
        n = vl - vr
        if n <= 0:
            continue
        if n == 1 and r - l <= width:
            out.append((l, r))
            continue
        m = (l + r) / 2
        vm = _variations_at(seq, m)
        stack.append((m, r, vm, vr))
        stack.append((l, m, vl, vm))
    return sorted(out)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """Outcome of :func:`certify_positive`.

    On PASS ``sample``/``sample_value`` is the positive evaluation that fixes
    the sign of the root-free interval.  On FAIL ``witness`` is a rational
    point with ``p(witness) <= 0`` (``witness_value``).
    """

    passed: bool
    lo: object
    hi: object
    roots_in_interval: int
    sample: Fraction | None = None
    sample_value: Fraction | None = None
    witness: Fraction | None = None
    witness_value: Fraction | None = None

    def summary(self) -> str:
        if self.passed:
            return (f"sturm roots=0 on ({_fmt(self.lo)}, {_fmt(self.hi)}); "
                    f"p({self.sample})>0")
        return f"witness t={self.witness} p(t)={self.witness_value}"


def _fmt(b) -> str:
    if b == INF:
        return "+inf"
    if b == -INF:
        return "-inf"
    return str(b)


def _sample_point(lo, hi) -> Fraction:
    if lo != -INF and hi != INF:
        return (lo + hi) / 2
    if lo != -INF:
        return lo + 1
    if hi != INF:
        return hi - 1
    return Fraction(0)


def _find_witness(p: RationalPolynomial, lo, hi):
    """A rational point in (lo, hi) where p <= 0, assuming one exists."""
    candidates = []
    for l, r in isolate_roots(p, lo, hi, width=Fraction(1, 2**40)):
        candidates.extend([r, (l + r) / 2, l])
    # even-multiplicity roots touch zero without a sign change; they are
    # roots of gcd(p, p') and are tried exactly when rational
    g = poly_gcd(p, poly_derivative(p))
    if g.degree == 1:
        candidates.append(-g.coeffs[0] / g.coeffs[1])
    best = None
    for t in candidates:
        if (lo != -INF and t <= lo) or (hi != INF and t >= hi):
            continue
        v = poly_eval_exact(p, t)
        if v <= 0:
            return t, v
        if best is None or v < best[1]:
            best = (t, v)
    return best if best else (None, None)


def certify_positive(p: RationalPolynomial, lo=-INF, hi=INF) -> Certificate:
    """Decide exactly whether ``p > 0`` on the open interval ``(lo, hi)``."""
    if p.is_zero():
        raise DegeneratePolynomialError("degenerate polynomial")
    lo, hi = _normalise_bound(lo), _normalise_bound(hi)
    if not lo < hi:
        raise ValueError("empty interval: need lo < hi")
    n = count_roots_open(p, lo, hi)
    t = _sample_point(lo, hi)
    v = poly_eval_exact(p, t)
    if n == 0 and v > 0:
        return Certificate(True, lo, hi, 0, sample=t, sample_value=v)
    if v <= 0:
        return Certificate(False, lo, hi, n, witness=t, witness_value=v)
    w, wv = _find_witness(p, lo, hi)
    return Certificate(False, lo, hi, n, witness=w, witness_value=wv)
