"""Command-line front end.

    psilog constants
    psilog eval --x 0 --a 1/2 --order 1
    psilog bounds psi --x 1
    psilog bounds harmonic --n 10 --a 0.5
    psilog gamma-table --format csv
    psilog order --seq l:a1 --n 128
    psilog certify --filter w8

Exit codes: 0 success, 1 certification or containment failure, 2 usage or
domain error.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import sys
from fractions import Fraction

import click

from . import approximant as ap
from . import bounds as bd
from . import certify as cf
from . import gammaseq as gs
from .numcore import PrecisionContext
from .oracle import DomainError, InsufficientPrecisionError, euler_gamma, polygamma, zeta3

PREC_ENV = "PSILOG_PREC"
EXIT_FAIL = 1
EXIT_USAGE = 2


class Output:
    def __init__(self, ctx: PrecisionContext, kind: str, sig: int):
        self.ctx = ctx
        self.kind = kind
        self.sig = sig

    def full(self, v) -> str:
        if isinstance(v, Fraction):
            return str(v)
        if isinstance(v, (str, int)):
            return str(v)
        mp = self.ctx.mp
        if mp.isinf(v):
            return "+inf" if v > 0 else "-inf"
        return gs.full_precision(v, self.ctx)

    def short(self, v) -> str:
        if isinstance(v, str):
            return v
        if isinstance(v, Fraction):
            v = self.ctx.real(v)
        if self.ctx.mp.isinf(v):
            return "+inf" if v > 0 else "-inf"
        return gs.format_sig(self.ctx.mp.nstr(v, self.ctx.digits), self.sig)

    def emit(self, records: list[dict], text: str):
        if self.kind == "json":
            click.echo(json.dumps(records, indent=2))
        elif self.kind == "csv":
            buf = io.StringIO()
            if records:
                cols = list(records[0])
                for r in records[1:]:
                    cols.extend(k for k in r if k not in cols)
                w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
                w.writeheader()
                w.writerows(records)
            click.echo(buf.getvalue(), nl=False)
        else:
            click.echo(text)


def _table(rows: list[list[str]], header: list[str]) -> str:
    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    lines += [fmt.format(*map(str, r)) for r in rows]
    return "\n".join(line.rstrip() for line in lines)


def common(f):
    @click.option("--prec", type=click.IntRange(16, 10000), envvar=PREC_ENV, default=50,
                  show_default=True, help=f"Decimal digits (env {PREC_ENV}).")
    @click.option("--format", "fmt", type=click.Choice(["text", "csv", "json"]), default="text",
                  show_default=True)
    @click.option("--sig-digits", type=click.IntRange(1, 60), default=5, show_default=True,
                  help="Significant digits in displayed values.")
    @functools.wraps(f)
    def wrapper(prec, fmt, sig_digits, **kw):
        out = Output(PrecisionContext(prec), fmt, sig_digits)
        try:
            code = f(out, **kw)
        except (DomainError, bd.NoTheoremError, gs.PrecisionGuardError,
                InsufficientPrecisionError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        except ap.RootBracketError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_FAIL)
        except (ValueError, ZeroDivisionError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_USAGE)
        sys.exit(code or 0)

    return wrapper


def _param(text: str) -> ap.ParamA:
    try:
        return ap.ParamA.parse(text)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def _number(text: str):
    """Exact rational when the text is one, otherwise a decimal string."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"not a number: {text!r}") from None


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Logarithmic approximations of psi and sequences converging to gamma."""


@main.command()
@common
def constants(out: Output):
    """Threshold parameters, x0, gamma, zeta(3) and offset constants."""
    c = out.ctx
    th = ap.thresholds(c)
    x0, peak = ap.solve_x0(c)
    exact = "closed form"
    rows = [
        ("a1", th.a1, "(40 + 3 sqrt 205)/105; C2(a) = 0", exact, ""),
        ("a2", th.a2, "(40 - 3 sqrt 205)/105", exact, ""),
        ("a0p", th.a0_prime, "psi'(1) = L_x(0, a)", exact, ""),
        ("a0", th.a0, "psi(1) = L(0, a)", th.a0_tolerance, "(1/2, 3/5)"),
        ("a0pp", th.a0_double_prime, "psi''(1) = L_xx(0, a)", th.a0_double_prime_tolerance,
         "(1/3, 1/2)"),
        ("x0", x0, "psi'(x+1) = L_x(x, a0)", "", "(0, 1/5)"),
        ("F(x0)", peak, "psi(x0+1) - L(x0, a0)", "", ""),
        ("gamma", euler_gamma(c), "H_N - psi(N+1)", "", ""),
        ("zeta3", zeta3(c), "-psi''(1)/2", "", ""),
    ]
    for name, a in (("a1", ap.A1), ("inf", ap.A_INFINITY), ("1/2", Fraction(1, 2)),
                    ("4/5", Fraction(4, 5))):
        rows.append((f"c0({name})", ap.c0(a, c), "L(0, a) + gamma", "", ""))
    for name, a in (("a1", ap.A1), ("1/2", Fraction(1, 2)), ("4/5", Fraction(4, 5))):
        rows.append((f"c1({name})", ap.c1(a, c), "1 - L(1, a)", "", ""))
    records = [{"name": n, "value": out.full(v), "display": out.short(v), "definition": d,
                "tolerance": out.full(t) if t not in ("", exact) else t, "bracket": b}
               for n, v, d, t, b in rows]
    text = _table([[r["name"], r["value"], r["definition"], r["bracket"],
                    out.short(t) if t not in ("", exact) else t]
                   for r, (_, _, _, t, _) in zip(records, rows)],
                  ["name", "value", "definition", "bracket", "tolerance"])
    out.emit(records, text)


@main.command("eval")
@click.option("--x", "x_text", required=True, help="Point x (decimal or p/q).")
@click.option("--a", "a_text", default="a1", show_default=True,
              help="Parameter: decimal, p/q, a1, a0, a0p, a0pp or inf.")
@click.option("--order", type=click.IntRange(0, 3), default=0, show_default=True,
              help="Highest x-derivative to print.")
@common
def eval_cmd(out: Output, x_text, a_text, order):
    """L(x, a) and its x-partials against psi^(k)(x+1)."""
    c = out.ctx
    x = _number(x_text)
    a = _param(a_text)
    records = []
    for k in range(order + 1):
        approx = ap.L(x, a, c) if k == 0 else ap.L_partial_x(k, x, a, c)
        exact = polygamma(k, c.real(x) + 1, c)
        res = exact - approx
        records.append({"k": k, "x": str(x), "a": a.label(), "approximant": out.full(approx),
                        "oracle": out.full(exact), "residual": out.full(res),
                        "residual_display": out.short(res)})
    text = _table([[r["k"], r["approximant"], r["oracle"], r["residual_display"]]
                   for r in records], ["k", "d^k L/dx^k", "psi^(k)(x+1)", "residual"])
    out.emit(records, text)


@main.command("bounds")
@click.argument("target", type=click.Choice([t.value for t in bd.Target]))
@click.option("--x", "x_text", help="Point x for psi, psi1, psi2.")
@click.option("--n", type=int, help="Index n for harmonic.")
@click.option("--a", "a_text", help="Parameter a (psi offset pair or harmonic; default a1).")
@common
def bounds_cmd(out: Output, target, x_text, n, a_text):
    """Two-sided enclosure with the oracle value and a containment verdict."""
    c = out.ctx
    t = bd.Target(target)
    if t is bd.Target.HARMONIC:
        if n is None:
            raise click.UsageError("harmonic needs --n")
        enc = bd.harmonic_enclosure(n, _param(a_text or "a1"), c)
    else:
        if x_text is None:
            raise click.UsageError(f"{target} needs --x")
        x = _number(x_text)
        if t is bd.Target.PSI:
            enc = (bd.psi_enclosure_offset(x, _param(a_text), c) if a_text
                   else bd.psi_enclosure(x, c))
        else:
            enc = bd.polygamma_bounds(1 if t is bd.Target.PSI1 else 2, x, c)
    verdict, value = bd.verify_enclosure(enc, c)
    width = enc.width
    rec = {"target": t.value, "argument": str(enc.argument), "lo": out.full(enc.lo),
           "hi": out.full(enc.hi), "width": out.full(width), "oracle": out.full(value),
           "verdict": verdict.value,
           "justification": "; ".join(th.value for th in enc.justification)}
    lo_op = "<" if enc.lo_strict else "<="
    hi_op = "<" if enc.hi_strict else "<="
    text = "\n".join([
        f"{t.value}({enc.argument}):  lo {lo_op} value {hi_op} hi",
        f"  lo      {rec['lo']}",
        f"  hi      {rec['hi']}",
        f"  width   {out.short(width)}",
        f"  oracle  {rec['oracle']}",
        f"  verdict {verdict.value}",
        f"  by      {rec['justification']}",
    ])
    out.emit([rec], text)
    return EXIT_FAIL if verdict is bd.Verdict.FAIL else 0


def _seq(text: str) -> gs.SequenceId:
    try:
        return gs.SequenceId.parse(text)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


@main.command("gamma-table")
@click.option("--seq", "seqs", multiple=True,
              help="Sequence id (repeatable): sigma, tau, delta, ..., or l:<a>.")
@click.option("--n", "ns", type=click.IntRange(1), multiple=True, help="Index n (repeatable).")
@common
def gamma_table(out: Output, seqs, ns):
    """|sequence_n - gamma| for the chosen sequences and indices."""
    ids = tuple(_seq(s) for s in seqs) or gs.DEFAULT_TABLE_IDS
    ns = tuple(ns) or gs.DEFAULT_TABLE_NS
    table = gs.error_table(ids, ns, out.ctx)
    records = []
    for sid in ids:
        j = ids.index(sid)
        for i, n in enumerate(ns):
            records.append({"id": sid.label, "n": n, "error": out.full(table.cells[i][j]),
                            "display": out.short(table.cells[i][j])})
    shown = table.display(out.sig)
    text = _table([[n, *row] for n, row in zip(ns, shown)], ["n", *(s.label for s in ids)])
    out.emit(records, text)


@main.command("order")
@click.option("--seq", "seq", required=True, help="Sequence id, e.g. sigma or l:a1.")
@click.option("--n", type=click.IntRange(1), required=True)
@common
def order_cmd(out: Output, seq, n):
    """Empirical order log2(|e_n| / |e_2n|) against the nominal rate."""
    sid = _seq(seq)
    est = gs.order_estimate(sid, n, out.ctx)
    rec = {"id": sid.label, "n": n, "p_hat": repr(est.p_hat), "nominal": sid.nominal_order}
    text = f"{sid.label}  n={n}  p_hat={est.p_hat:.{out.sig}g}  nominal={sid.nominal_order}"
    out.emit([rec], text)


@main.command("certify")
@click.option("--filter", "pattern", help="Substring of claim name or source.")
@click.option("--constants", "constants_path", type=click.Path(exists=True, dir_okay=False),
              help="Alternative polynomial constants file.")
@common
def certify_cmd(out: Output, pattern, constants_path):
    """Run the exact sign and value claims; exit 1 on any failure."""
    try:
        summary = cf.verify_all(pattern, constants_path)
    except cf.ClaimError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_FAIL
    records = [{k: v for k, v in r.items() if k != "seconds"} for r in summary.records()]
    out.emit(records, summary.text())
    for r in summary.failures:
        click.echo(f"FAIL {r.claim.name}: {r.detail}", err=True)
    return 0 if summary.all_passed else EXIT_FAIL


if __name__ == "__main__":
    main()
