"""Exact verification of the polynomial sign and value claims behind the bounds.

Each claim is checked with rational arithmetic only: Sturm counts for signs,
exact evaluation for values, and arithmetic in Q(sqrt 205) for the identity
at the irrational parameter a1.
"""

from __future__ import annotations

import enum
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .numcore import (
    INF, Certificate, RationalPolynomial, as_fraction, certify_positive,
    poly_derivative, poly_eval_exact,
)


class ClaimError(ValueError):
    pass


class Assertion(enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    EXACT_VALUE = "exact_value"
    IDENTITY_CONSTANT = "identity_constant"
    ALL_COEFFS_POSITIVE = "all_coeffs_positive"


# ---------------------------------------------------------------------------
# Q(sqrt 205)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QSqrt205:
    """u + v*sqrt(205) with rational u, v."""

    u: Fraction = Fraction(0)
    v: Fraction = Fraction(0)

    D = 205

    def __post_init__(self):
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))

    @staticmethod
    def lift(x) -> QSqrt205:
        return x if isinstance(x, QSqrt205) else QSqrt205(as_fraction(x))

    def __add__(self, o):
        o = QSqrt205.lift(o)
        return QSqrt205(self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt205(-self.u, -self.v)

    def __sub__(self, o):
        return self + (-QSqrt205.lift(o))

    def __rsub__(self, o):
        return QSqrt205.lift(o) - self

    def __mul__(self, o):
        o = QSqrt205.lift(o)
        return QSqrt205(self.u * o.u + self.D * self.v * o.v, self.u * o.v + self.v * o.u)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = QSqrt205(1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self) -> QSqrt205:
        return QSqrt205(self.u, -self.v)

    def norm(self) -> Fraction:
        return self.u * self.u - self.D * self.v * self.v

    def __truediv__(self, o):
        o = QSqrt205.lift(o)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 205)")
        p = self * o.conjugate()
        return QSqrt205(p.u / n, p.v / n)

    def __rtruediv__(self, o):
        return QSqrt205.lift(o) / self

    def is_rational(self) -> bool:
        return self.v == 0

    def __eq__(self, o):
        try:
            o = QSqrt205.lift(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.u == o.u and self.v == o.v

    def __hash__(self):
        return hash((self.u, self.v))

    def __str__(self):
        if self.v == 0:
            return str(self.u)
        return f"{self.u} + {self.v}*sqrt(205)"


A1_EXACT = QSqrt205(Fraction(40, 105), Fraction(3, 105))


def q_coefficients(a):
    """(C2, C0) with q(x, a) = C2 (x+1)^2 - C0; a rational or in Q(sqrt 205)."""
    c2 = (-315 * a * a + 240 * a + 7) / (2025 * a)
    c0 = (a + Fraction(1, 3)) ** 2 * (a - Fraction(1, 15)) ** 2 / (9 * a * a)
    return c2, c0


def q_poly_coeffs(a) -> list:
    """Ascending x-coefficients of q(x, a)."""
    c2, c0 = q_coefficients(a)
    return [c2 - c0, 2 * c2, c2]


def q_poly(a) -> RationalPolynomial:
    return RationalPolynomial(q_poly_coeffs(Fraction(a)))


def p_poly(a) -> RationalPolynomial:
    """Denominator p(x, a) of F'(x+1) - F'(x); a rational > 1/15."""
    a = Fraction(a)
    x = RationalPolynomial([0, 1])
    inv = Fraction(1, 45) / a
    one = RationalPolynomial([1])
    return ((x + one) ** 2
            * RationalPolynomial([a + Fraction(7, 3), 3, 1])
            * RationalPolynomial([a + Fraction(1, 3), 1, 1])
            * RationalPolynomial([Fraction(1, 3) - inv, 1, 1])
            * RationalPolynomial([Fraction(7, 3) - inv, 3, 1]))


# ---------------------------------------------------------------------------
# constants file
# ---------------------------------------------------------------------------

_LINE = re.compile(r"^(?P<name>[\w\[\]]+)\s*;\s*(?P<var>\w+)\s*;\s*(?P<coeffs>.+)$")


def default_constants_path():
    return resources.files("psilog") / "data" / "proof_polynomials.txt"


def load_constants(path=None) -> dict[str, RationalPolynomial]:
    text = (Path(path).read_text() if path is not None
            else default_constants_path().read_text())
    out: dict[str, RationalPolynomial] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE.match(line)
        if not m:
            raise ClaimError(f"constants file line {lineno}: cannot parse {raw!r}")
        try:
            coeffs = [Fraction(tok) for tok in m["coeffs"].split()]
        except (ValueError, ZeroDivisionError):
            raise ClaimError(f"constants file line {lineno}: bad coefficient") from None
        out[m["name"]] = RationalPolynomial.from_descending(coeffs)
    return out


def _family(consts, stem: str) -> tuple[RationalPolynomial, ...]:
    keys = sorted((int(k[len(stem) + 1:-1]), k) for k in consts if k.startswith(stem + "["))
    if not keys:
        raise ClaimError(f"constants file has no {stem}[i] records")
    return tuple(consts[k] for _, k in keys)


# ---------------------------------------------------------------------------
# claims
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Claim:
    """A single exact assertion about a polynomial.

    ``polynomial`` is a RationalPolynomial, except for IDENTITY_CONSTANT
    (ascending coefficients that may lie in Q(sqrt 205)) and
    ALL_COEFFS_POSITIVE (a tuple of polynomials in the parameter).
    Interval ends may be infinite; ``closed`` gives (lo closed, hi closed).
    """

    name: str
    polynomial: object
    assertion: Assertion
    source: str
    lo: object = -INF
    hi: object = INF
    closed: tuple[bool, bool] = (False, False)
    point: Fraction | None = None
    value: Fraction | None = None
    note: str = ""

    def describe(self) -> str:
        a = self.assertion
        if a is Assertion.EXACT_VALUE:
            return f"value at {self.point} = {self.value}"
        if a is Assertion.IDENTITY_CONSTANT:
            return f"identically {self.value}"
        left = "[" if self.closed[0] else "("
        right = "]" if self.closed[1] else ")"
        return f"{a.value} on {left}{_fmt(self.lo)}, {_fmt(self.hi)}{right}"


def _fmt(b) -> str:
    if b == INF:
        return "+inf"
    if b == -INF:
        return "-inf"
    return str(b)


def builtin_claims(constants_path=None) -> list[Claim]:
    c = load_constants(constants_path)
    try:
        w8, w8s, w3 = c["w8"], c["w8_shift_1_8"], c["w3"]
        P, r, R, v = c["P_a0p"], c["r_a0pp"], c["R_a0pp"], c["v_a0"]
    except KeyError as exc:
        raise ClaimError(f"constants file is missing {exc}") from None
    lemma_P, lemma_Q = _family(c, "lemma_P"), _family(c, "lemma_Q")

    x1sq = RationalPolynomial([1, 2, 1])  # (x+1)^2
    w = w8.compose(x1sq)
    w2 = RationalPolynomial(w8s.coeffs[:3])
    q48 = q_poly(Fraction(12, 25))
    q48_at = Fraction(2341501, 1312200000)
    q11 = q_poly(Fraction(11, 21))
    q11_at = Fraction(2448, 3705625)
    one = RationalPolynomial([1])
    x = RationalPolynomial([0, 1])

    # positive denominators that accompany the numerators above
    half3 = RationalPolynomial([Fraction(3, 2), 1])
    shifted = RationalPolynomial([27, 0, 520, 0, 560]).compose(half3)
    u = (shifted ** 2 * (x + one) ** 3 * RationalPolynomial([Fraction(13, 45), 1, 1]) ** 2
         * RationalPolynomial([Fraction(5, 6), 1, 1]) ** 2)
    quartic = RationalPolynomial([252, 570, 505, 210, 35])
    Q_den = (RationalPolynomial([47, 60, 60]) ** 2 * RationalPolynomial([23, 81, 81]) ** 2
             * quartic ** 2 * (x + one) ** 3)
    s_den = (RationalPolynomial([47, 60, 60]) ** 2 * RationalPolynomial([23, 81, 81]) ** 2
             * RationalPolynomial([167, 180, 60]) ** 2 * RationalPolynomial([185, 243, 81]) ** 2
             * (x + one) ** 3)
    S_den = ((x + one) ** 4 * RationalPolynomial([113, 150, 150]) ** 3
             * RationalPolynomial([53, 189, 189]) ** 3 * quartic ** 3)

    F1, F8, F20, F350, F5 = Fraction(1, 15), Fraction(1, 8), Fraction(1, 20), Fraction(3, 50), Fraction(1, 5)
    POS, NEG, VAL = Assertion.POSITIVE, Assertion.NEGATIVE, Assertion.EXACT_VALUE
    A1_SRC, A0P_SRC, A0PP_SRC, A0_SRC, LEM_SRC = (
        "upper_bound_a1", "decreasing_a0p", "convex_a0pp", "lower_bound_a0", "partial_signs")

    return [
        # a1: third-difference numerator w(x) > 0 on (-1, inf) via t = (x+1)^2
        Claim("q_at_a1_is_constant", tuple(q_poly_coeffs(A1_EXACT)), Assertion.IDENTITY_CONSTANT,
              A1_SRC, value=Fraction(-144, 1225)),
        Claim("w_positive_on_minus1_inf", w, POS, A1_SRC, -1, INF,
              note="called r in the displayed difference equation; registered as w"),
        Claim("w8_positive_on_0_inf", w8, POS, A1_SRC, 0, INF),
        Claim("w8_shift_is_translate", w8s - w8.shift(F8), Assertion.IDENTITY_CONSTANT, A1_SRC,
              value=Fraction(0)),
        Claim("w2_positive_on_R", w2, POS, A1_SRC),
        Claim("w8_at_1_8", w8, VAL, A1_SRC, point=F8, value=Fraction(315567169303, 16777216)),
        Claim("w3_positive_on_0_1_8", w3, POS, A1_SRC, 0, F8),
        # a0': F'' < P/(6Q) on (0, 1/20]; difference argument beyond 1/20
        Claim("q_48_100_at_1_20", q48, VAL, A0P_SRC, point=F20, value=q48_at),
        Claim("q_48_100_exceeds_value_past_1_20", q48 - q48_at, POS, A0P_SRC, F20, INF,
              note="needs the (x+1)^2 coefficient of q positive at a = 48/100"),
        Claim("P_increasing_on_0_1_20", poly_derivative(P), POS, A0P_SRC, 0, F20, (False, True)),
        Claim("P_negative_on_0_1_20", P, NEG, A0P_SRC, 0, F20, (False, True)),
        Claim("P_at_1_20", P, VAL, A0P_SRC, point=F20,
              value=Fraction(-2874530403954909124821, 1024000000000)),
        Claim("Q_positive_on_0_1_20", Q_den, POS, A0P_SRC, 0, F20, (False, True)),
        # a0'': difference argument on (3/50, inf), third derivative on (0, 3/50]
        Claim("r_increasing_on_0_inf", poly_derivative(r), POS, A0PP_SRC, 0, INF),
        Claim("r_positive_on_3_50_inf", r, POS, A0PP_SRC, F350, INF),
        Claim("r_at_3_50", r, VAL, A0PP_SRC, point=F350,
              value=Fraction(1114560148894087067992508, 3814697265625)),
        Claim("s_positive_on_3_50_inf", s_den, POS, A0PP_SRC, F350, INF),
        Claim("R_convex_on_0_inf", poly_derivative(R, 2), POS, A0PP_SRC, 0, INF),
        Claim("R_negative_on_0_3_50", R, NEG, A0PP_SRC, 0, F350, (True, True)),
        Claim("R_at_0", R, VAL, A0PP_SRC, point=Fraction(0), value=Fraction(-4420688040144642816)),
        Claim("R_at_3_50", R, VAL, A0PP_SRC, point=F350,
              value=Fraction(-337711343455989855048292675691209992531618111,
                             190734863281250000000000000)),
        Claim("S_positive_on_0_3_50", S_den, POS, A0PP_SRC, 0, F350, (True, True)),
        # a0: F' decreasing on (0, 1/5) and difference argument on [1/5, inf)
        Claim("v_convex_on_0_inf", poly_derivative(v, 2), POS, A0_SRC, 0, INF),
        Claim("v_negative_on_0_1_5", v, NEG, A0_SRC, 0, F5),
        Claim("v_at_0", v, VAL, A0_SRC, point=Fraction(0), value=Fraction(-192808962)),
        Claim("v_at_1_5", v, VAL, A0_SRC, point=F5, value=Fraction(-245738739045744, 1953125)),
        Claim("u_positive_on_0_1_5", u, POS, A0_SRC, 0, F5),
        Claim("q_11_21_at_1_5", q11, VAL, A0_SRC, point=F5, value=q11_at),
        Claim("q_11_21_positive_from_1_5", q11, POS, A0_SRC, F5, INF, (True, False)),
        # signs of the mixed partials in a
        Claim("lemma_P_coeffs_positive", lemma_P, Assertion.ALL_COEFFS_POSITIVE, LEM_SRC, F1, INF),
        Claim("lemma_Q_coeffs_positive", lemma_Q, Assertion.ALL_COEFFS_POSITIVE, LEM_SRC, F1, INF,
              note="second b1 row is b0; coefficients carry an a^4 scaling"),
    ]


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClaimReport:
    claim: Claim
    passed: bool
    detail: str
    seconds: float
    certificates: tuple[Certificate, ...] = field(default=())
    witness: object = None

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def record(self) -> dict:
        return {"name": self.claim.name, "source": self.claim.source,
                "assertion": self.claim.assertion.value, "claim": self.claim.describe(),
                "verdict": self.verdict, "detail": self.detail,
                "seconds": round(self.seconds, 4)}


def _sign_check(p: RationalPolynomial, c: Claim):
    certs = []
    cert = certify_positive(p, c.lo, c.hi)
    certs.append(cert)
    if not cert.passed:
        return False, cert.summary(), tuple(certs), cert.witness
    for end, closed in ((c.lo, c.closed[0]), (c.hi, c.closed[1])):
        if closed:
            val = poly_eval_exact(p, end)
            if not val > 0:
                return False, f"witness t={end} p(t)={val}", tuple(certs), end
    ends = [str(e) for e, cl in ((c.lo, c.closed[0]), (c.hi, c.closed[1])) if cl]
    extra = f"; endpoints {', '.join(ends)} checked exactly" if ends else ""
    return True, cert.summary() + extra, tuple(certs), None


def verify_claim(c: Claim) -> ClaimReport:
    start = time.perf_counter()
    a = c.assertion
    certs: tuple = ()
    witness = None
    if a in (Assertion.POSITIVE, Assertion.NEGATIVE):
        if not isinstance(c.polynomial, RationalPolynomial):
            raise ClaimError(f"{c.name}: sign claims need a RationalPolynomial")
        p = c.polynomial if a is Assertion.POSITIVE else -c.polynomial
        ok, detail, certs, witness = _sign_check(p, c)
    elif a is Assertion.EXACT_VALUE:
        if c.point is None or c.value is None:
            raise ClaimError(f"{c.name}: exact-value claims need point and value")
        got = poly_eval_exact(c.polynomial, c.point)
        ok = got == c.value
        detail = f"p({c.point}) = {got}" + ("" if ok else f" != {c.value}")
        witness = None if ok else c.point
    elif a is Assertion.IDENTITY_CONSTANT:
        if c.value is None:
            raise ClaimError(f"{c.name}: identity claims need a value")
        coeffs = (c.polynomial.coeffs if isinstance(c.polynomial, RationalPolynomial)
                  else tuple(c.polynomial))
        if not coeffs:
            coeffs = (Fraction(0),)
        higher = [k for k, ck in enumerate(coeffs) if k and ck != 0]
        const = coeffs[0]
        ok = not higher and const == c.value
        if ok:
            detail = f"all x-coefficients vanish exactly; constant = {const}"
        elif higher:
            detail = f"coefficient of x^{higher[0]} is {coeffs[higher[0]]}, not 0"
        else:
            detail = f"constant term {const} != {c.value}"
    elif a is Assertion.ALL_COEFFS_POSITIVE:
        family = tuple(c.polynomial)
        if not family or not all(isinstance(p, RationalPolynomial) for p in family):
            raise ClaimError(f"{c.name}: coefficient claims need polynomials in the parameter")
        ok, parts, cert_list = True, [], []
        for k, p in enumerate(family):
            ok_k, det_k, cs, wit = _sign_check(p, c)
            cert_list.extend(cs)
            if not ok_k:
                ok, witness = False, wit
                parts.append(f"coefficient {k}: {det_k}")
                break
        certs = tuple(cert_list)
        detail = parts[0] if parts else f"{len(family)} coefficients certified on ({_fmt(c.lo)}, {_fmt(c.hi)})"
    else:
        raise ClaimError(f"{c.name}: unknown assertion")
    return ClaimReport(c, ok, detail, time.perf_counter() - start, certs, witness)


@dataclass(frozen=True)
class Summary:
    reports: tuple[ClaimReport, ...]
    seconds: float

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.reports)

    @property
    def failures(self) -> tuple[ClaimReport, ...]:
        return tuple(r for r in self.reports if not r.passed)

    def text(self) -> str:
        lines = [f"{r.verdict:4}  {r.claim.name:36} {r.claim.describe()}  [{r.detail}]  {r.seconds:.3f}s"
                 for r in self.reports]
        lines.append(f"{len(self.reports) - len(self.failures)}/{len(self.reports)} claims passed"
                     f" in {self.seconds:.2f}s")
        return "\n".join(lines)

    def records(self) -> list[dict]:
        return [r.record() for r in self.reports]


def select(claims, pattern: str | None):
    """Claims whose name or source contains ``pattern`` (case-insensitive)."""
    if not pattern:
        return list(claims)
    pat = pattern.lower()
    return [c for c in claims if pat in c.name.lower() or pat in c.source.lower()]


def verify_all(pattern: str | None = None, constants_path=None) -> Summary:
    start = time.perf_counter()
    reports = tuple(verify_claim(c) for c in select(builtin_claims(constants_path), pattern))
    return Summary(reports, time.perf_counter() - start)
