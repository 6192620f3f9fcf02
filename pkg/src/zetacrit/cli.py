"""Command-line front end.

    zetacrit tables p-matrix --order 4
    zetacrit verify recursion --s 0.5+14.134725141734693790457j
    zetacrit scan --t-min 10 --t-max 30 --step 0.05 --N 32 --out scan.csv
    zetacrit --format json sequence 0.3 64 --emit c
    zetacrit sequence -2 8 --emit u

Global options (--prec, --format, --out, ...) go before the command name.

Exit codes: 0 pass, 1 check failure, 2 usage or domain error, 3 numerical
nonconvergence.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import click
from mpmath import mp, mpc, mpf

from . import hpolya, polyx, quadid, regip, seqgen, spectrum
from .checks import Report
from .errors import (EtaZero, PoleError, PrecisionEscalationExhausted, QuadratureNonconvergence,
                     U1Zero, ZetacritError)
from .mpsf import GUARD_BITS, PrecisionContext, to_mpc

__all__ = ["main", "RunConfig", "Table"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3
SUITES = ("inner-product", "identities", "recursion", "hpolya", "all")
TABLES = ("q-polys", "ml-polys", "r-polys", "p-matrix", "matrices")
EMITS = ("u", "v", "c", "residuals", "decay")


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 256
    rel_tol: float = 1e-30
    output_format: str = "csv"
    output_path: str | None = None
    threads: int = 1

    def __post_init__(self):
        if self.precision_bits < 64:
            raise click.BadParameter("--prec must be >= 64")
        if self.threads < 1:
            raise click.BadParameter("--threads must be >= 1")

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(bits=self.precision_bits, rel_tol=max(self.rel_tol, 2.0 ** (1 - self.precision_bits)))

    @property
    def digits(self) -> int:
        return max(15, int(self.precision_bits * math.log10(2)))


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    meta: dict = field(default_factory=dict)


# ------------------------------------------------------------- formatting

def fmt(x, digits: int) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, mpf):
        return mp.nstr(x, digits, strip_zeros=False, min_fixed=-5, max_fixed=5)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _split(z, digits):
    z = mpc(z)
    return fmt(z.real, digits), fmt(z.imag, digits)


def render(table: Table, cfg: RunConfig) -> str:
    meta = {"precision_bits": cfg.precision_bits, "rel_tol": cfg.rel_tol, **table.meta}
    if cfg.output_format == "json":
        cells = [[_jsonable(x, cfg.digits) for x in row] for row in table.rows]
        doc = {"meta": _jsonable(meta, cfg.digits), "columns": table.columns,
               "rows": [dict(zip(table.columns, r)) for r in cells]}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    cells = [[fmt(x, cfg.digits) for x in row] for row in table.rows]
    buf = io.StringIO()
    for k in sorted(meta):
        buf.write(f"# {k}: {json.dumps(_jsonable(meta[k], cfg.digits), sort_keys=True)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    w.writerows(cells)
    return buf.getvalue()


def _jsonable(x, digits):
    if isinstance(x, dict):
        return {str(k): _jsonable(v, digits) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v, digits) for v in x]
    if isinstance(x, (str, bool, int)) or x is None:
        return x
    if isinstance(x, float):
        return x if math.isfinite(x) else str(x)
    return fmt(x, digits)


def emit(table: Table, cfg: RunConfig) -> None:
    text = render(table, cfg)
    if cfg.output_path in (None, "-"):
        click.echo(text, nl=False)
    else:
        Path(cfg.output_path).write_text(text)


def _parse_s(text: str):
    """Rationals ("1/3", "-2") stay exact; anything else is parsed at high precision."""
    try:
        return Fraction(text)
    except ValueError:
        pass
    try:
        return to_mpc(text)
    except (ValueError, TypeError) as exc:
        raise click.BadParameter(f"cannot parse s={text!r}; expected a+bj or num/den") from exc


def _s_label(s) -> str:
    if isinstance(s, Fraction):
        return str(s)
    return f"{mp.nstr(mpc(s).real, 30)}{'+' if mpc(s).imag >= 0 else '-'}{mp.nstr(abs(mpc(s).imag), 30)}j"


# --------------------------------------------------------------- commands

@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--prec", type=int, default=256, envvar="ZETACRIT_PREC", show_default=True,
              help="Working precision in bits.")
@click.option("--rel-tol", type=float, default=1e-30, show_default=True)
@click.option("--format", "output_format", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", "output_path", type=click.Path(dir_okay=False), default=None,
              help="Output file (default stdout).")
@click.option("--threads", type=int, default=1, show_default=True)
@click.pass_context
def main(ctx, prec, rel_tol, output_format, output_path, threads):
    """Verification and data tools for the eta-sequence zero criterion."""
    ctx.obj = RunConfig(prec, rel_tol, output_format, output_path, threads)


@main.command()
@click.argument("what", type=click.Choice(TABLES))
@click.option("--order", "-n", type=int, default=3, show_default=True,
              help="Highest polynomial index, or matrix size for p-matrix/matrices.")
@click.option("--kind", type=click.Choice(spectrum.KINDS), default="START", show_default=True)
@click.option("--s", "s_text", default=None, help="Rational s for s-dependent matrices.")
@click.option("--nu", default="0", show_default=True, help="Rational nu for p-matrix.")
@click.pass_obj
def tables(cfg: RunConfig, what, order, kind, s_text, nu):
    """Exact rational tables."""
    if order < 0 or (what in ("p-matrix", "matrices") and order < 1):
        raise click.BadParameter("order out of range", param_hint="--order")
    if what in ("q-polys", "ml-polys", "r-polys"):
        if what == "q-polys":
            polys = [polyx.q_poly(k) for k in range(order + 1)]
        elif what == "ml-polys":
            polys = [polyx.ml_poly(k) for k in range(order + 1)]
        else:
            polys = list(hpolya.r_family(order).polys)
        table = Table(["index", "power", "numerator", "denominator"], meta={"table": what, "order": order})
        for n, p in enumerate(polys):
            for m, c in enumerate(p.coeffs):
                if c:
                    table.rows.append([n, m, c.numerator, c.denominator])
    else:
        if what == "p-matrix":
            try:
                P = hpolya.p_matrix(order, Fraction(nu))
            except ValueError as exc:
                raise click.BadParameter(str(exc), param_hint="--nu") from exc
            entries, meta = P.rows(), {"table": what, "N": order, "nu": str(P.nu)}
        else:
            s = None
            if s_text is not None:
                s = _parse_s(s_text)
                if not isinstance(s, Fraction):
                    raise click.BadParameter("matrices need a rational s", param_hint="--s")
            try:
                system = spectrum.build(kind, order, s)
            except ValueError as exc:
                raise click.BadParameter(str(exc), param_hint="--s") from exc
            entries = system.rows()
            meta = {"table": what, "kind": kind, "N": order, "s": None if s is None else fmt(s, 0)}
        table = Table(["row", "col", "numerator", "denominator"], meta=meta)
        for i, row in enumerate(entries, 1):
            for j, x in enumerate(row, 1):
                x = Fraction(x)
                table.rows.append([i, j, x.numerator, x.denominator])
    emit(table, cfg)


def _suite_inner(cfg, s, N):
    return regip.orthogonality_check(16)


def _suite_identities(cfg, s, N):
    return quadid.identity_suite(cfg.ctx)


def _suite_recursion(cfg, s, N, tol=1e-8):
    s = mpc(0.3) if s is None else to_mpc(s)
    ctx = cfg.ctx
    rep = Report(f"recursion s={_s_label(s)}")
    bundle = seqgen.u_sequence(s, max(N, 12), ctx)
    for row in seqgen.recursion_residuals(bundle, range(1, 11), ctx):
        rep.add(f"recursion k={row.k}", row.relative <= tol, row.relative, tol)
    k0 = seqgen.k0_identity(s, ctx)
    rep.add("k=0 identity", k0.relative <= tol, k0.relative, tol)
    return rep


def _suite_hpolya(cfg, s, N):
    rep = Report("hpolya")
    fam = hpolya.r_family(24)
    rep.extend(fam.endpoint_check())
    expect = {(1, 1): Fraction(2, 3), (1, 2): Fraction(22, 45), (2, 2): Fraction(382, 945)}
    P = hpolya.p_matrix(4)
    for (i, j), want in expect.items():
        rep.add(f"P[{i},{j}]", P[i, j] == want, P[i, j] - want, 0)
    for n in (2, 4, 12, 16):
        h = hpolya.hermitian_check(n)
        rep.add(f"hermitian N={n}", h.passed, len(h.failures), 0)
    h = hpolya.hermitian_check(8, Fraction(1, 2))
    rep.add("hermitian N=8 nu=1/2", h.passed, len(h.failures), 0)
    pd = hpolya.positive_definite_check(12)
    rep.add("P N=12 leading minors > 0", pd.passed, len(pd.failures), 0)
    with mp.workprec(cfg.precision_bits + GUARD_BITS):
        g = hpolya.genp_kernel_eval("0.2", "0.3", cfg.ctx)
        rep.add("kernel PDE at (0.2, 0.3)", g["pde_residual"] <= 1e-6, float(g["pde_residual"]), 1e-6)
        bound = 1e-8 + g["tail_bound"]
        rep.add("kernel vs series at (0.2, 0.3)", g["series_gap"] <= bound, float(g["series_gap"]), float(bound))
    return rep


_SUITE_FUNCS = {
    "inner-product": _suite_inner,
    "identities": _suite_identities,
    "recursion": _suite_recursion,
    "hpolya": _suite_hpolya,
}


@main.command()
@click.argument("suite", type=click.Choice(SUITES))
@click.option("--s", "s_text", default=None, help="Point for the recursion suite (default 0.3).")
@click.option("--N", "n", type=int, default=12, show_default=True, help="Sequence length for the recursion suite.")
@click.pass_obj
def verify(cfg: RunConfig, suite, s_text, n):
    """Run a verification suite; exit 0 iff every check passes."""
    s = _parse_s(s_text) if s_text is not None else None
    names = [n for n in SUITES if n != "all"] if suite == "all" else [suite]
    table = Table(["suite", "check", "passed", "residual", "tol"], meta={"suite": suite})
    if s is not None:
        table.meta["s"] = _s_label(s)
    ok = True
    for name in names:
        with mp.workprec(cfg.precision_bits + GUARD_BITS):
            rep = _SUITE_FUNCS[name](cfg, s, n)
        ok &= rep.passed
        for c in rep.checks:
            table.rows.append([name, c.name, c.passed, _num(c.residual), _num(c.tol)])
    table.meta["passed"] = ok
    emit(table, cfg)
    sys.exit(EXIT_OK if ok else EXIT_FAIL)


def _num(x):
    if isinstance(x, (mpc, complex)):
        return mpf(abs(x))
    return x


@main.command()
@click.option("--t-min", type=float, default=10.0, show_default=True)
@click.option("--t-max", type=float, default=30.0, show_default=True)
@click.option("--step", type=float, default=0.05, show_default=True)
@click.option("--N", "n", type=int, default=32, show_default=True)
@click.option("--summary", type=click.Path(dir_okay=False), default=None,
              help="Where to write the JSON minima summary (default <out>.minima.json, or stderr).")
@click.pass_obj
def scan(cfg: RunConfig, t_min, t_max, step, n, summary):
    """|det| of the truncated system along s = 1/2 + it."""
    N = n
    if N < 1:
        raise click.BadParameter("N must be >= 1", param_hint="--N")
    try:
        ts, vals = spectrum.scan_profile(t_min, t_max, step, N, cfg.ctx, workers=cfg.threads)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc
    minima = spectrum.profile_minima(ts, vals, N, cfg.ctx)
    table = Table(["t", "abs_det", "log10_abs_det"],
                  meta={"N": N, "t_min": t_min, "t_max": t_max, "step": step})
    for t, v in zip(ts, vals):
        table.rows.append([t, v, math.log10(v) if v > 0 else float("-inf")])
    emit(table, cfg)
    doc = {"N": N, "precision_bits": cfg.precision_bits,
           "minima": [{"t": m.t, "abs_det": m.value, "grid_t": m.grid_t} for m in minima]}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    target = summary or (None if cfg.output_path in (None, "-") else cfg.output_path + ".minima.json")
    if target is None:
        click.echo(text, err=True, nl=False)
    else:
        Path(target).write_text(text)


@main.command(context_settings={"ignore_unknown_options": True})
@click.argument("s_text", metavar="S")
@click.argument("n", type=int, metavar="N")
@click.option("--emit", "what", type=click.Choice(EMITS), default="u", show_default=True)
@click.option("--method", type=click.Choice(["auto", "eta-sum", "integral"]), default="auto", show_default=True,
              help="v-sequence method.")
@click.pass_obj
def sequence(cfg: RunConfig, s_text, n, what, method):
    """Emit u_k, v_k, c_k, recursion residuals or the decay summary at S."""
    N = n
    if N < 1:
        raise click.BadParameter("N must be >= 1")
    s = _parse_s(s_text)
    ctx = cfg.ctx
    meta = {"s": _s_label(s), "N": N, "emit": what}
    with mp.workprec(cfg.precision_bits + GUARD_BITS):
        if what == "u":
            b = seqgen.u_sequence(s, N - 1, ctx)
            table = _series_table(b.u, b.err.get("u"), 0, meta)
        elif what == "v":
            b = seqgen.v_sequence(s, N, ctx, method)
            table = _series_table(b.v, b.err.get("v"), 0, meta)
            meta["method"] = b.method.get("v")
        elif what == "c":
            b = seqgen.c_sequence(s, N, ctx)
            table = _series_table(b.c, b.err.get("c"), 1, meta)
        elif what == "residuals":
            b = seqgen.u_sequence(s, N + 1, ctx)
            rows = seqgen.recursion_residuals(b, range(1, N + 1), ctx)
            table = Table(["k", "re", "im", "scale", "relative", "tail_err"], meta=meta)
            for r in rows:
                re, im = _split(r.residual, cfg.digits)
                table.rows.append([r.k, re, im, r.scale, r.relative, r.tail_err])
        else:
            b = seqgen.v_sequence(s, N, ctx, method)
            rep = seqgen.decay_report(b, "v")
            meta.update(c_star=rep.c_star, slope=rep.slope, threshold=rep.threshold, passed=rep.passed)
            table = Table(["k_lo", "k_hi", "window_max"], meta=meta)
            table.rows = [list(w) for w in rep.windows]
    emit(table, cfg)


def _series_table(values, errs, offset, meta):
    table = Table(["k", "re", "im", "err_est"], meta=meta)
    digits = max(15, int(mp.prec * math.log10(2)) - 10)
    for i, x in enumerate(values):
        re, im = _split(x, digits)
        e = errs[i] if errs is not None and i < len(errs) else 0.0
        table.rows.append([i + offset, re, im, float(e)])
    return table


def run(argv=None) -> int:
    """Entry point with structured errors and the documented exit codes."""
    try:
        main.main(args=argv, standalone_mode=False)
    except SystemExit as exc:
        return int(exc.code or 0)
    except click.exceptions.Abort:
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except (PrecisionEscalationExhausted, QuadratureNonconvergence) as exc:
        _error("nonconvergence", exc)
        return EXIT_NONCONVERGENCE
    except (EtaZero, U1Zero, PoleError) as exc:
        _error(_kebab(type(exc).__name__), exc)
        return EXIT_USAGE
    except (ZetacritError, ValueError) as exc:
        _error(_kebab(type(exc).__name__), exc)
        return EXIT_USAGE
    return EXIT_OK


def _kebab(name: str) -> str:
    return "".join("-" + c.lower() if c.isupper() and i else c.lower() for i, c in enumerate(name))


def _error(kind: str, exc: Exception) -> None:
    click.echo(json.dumps({"error": kind, "message": str(exc)}, sort_keys=True), err=True)


def entry() -> None:
    sys.exit(run())
