"""Command-line front end: verification runs, single-value queries, and
reconstruction of the three CM-point tables.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 corpus or
I/O error. Decimal output carries exactly ``digits`` significant figures,
rounded half-even, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import decimal
import json
import os
import sys
from importlib import resources

import mpmath
from mpmath import mpf

from .numerics import DomainError, PrecisionContext, QuadExpr
from .lfunctions import dirichlet_l2
from .epstein import epstein_gamma0, epstein_sl2
from .modular import CMPoint, alpha_n
from .series import series_constants_from_cm
from . import identities as ident

ENV_DIGITS = "UPDOWNLAB_DIGITS"

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_CORPUS = 3


def format_ap(value, digits: int) -> str:
    """Fixed-notation decimal string with exactly ``digits`` significant
    figures, round-half-even."""
    if hasattr(value, "imag"):
        if value.imag != 0:
            return (f"{format_ap(value.real, digits)} + "
                    f"{format_ap(value.imag, digits)}*i")
        value = value.real
    if not isinstance(value, mpf):
        # Convert at enough precision; mpf() rounds to the ambient context.
        with mpmath.workdps(digits + 10):
            value = mpf(value)
    raw = mpmath.nstr(value, digits + 10, strip_zeros=False)
    with decimal.localcontext() as dctx:
        dctx.prec = digits
        dctx.rounding = decimal.ROUND_HALF_EVEN
        d = +decimal.Decimal(raw)
    return format(d, "f")


def _context(args) -> PrecisionContext:
    return PrecisionContext(digits=args.digits)


def _report_dict(r: ident.VerificationReport, timings: bool) -> dict:
    out = {
        "id": r.id,
        "digits": r.digits,
        "lhs_value": format_ap(r.lhs_value, r.digits),
        "rhs_value": format_ap(r.rhs_value, r.digits),
        "abs_residual": mpmath.nstr(r.abs_residual, 3),
        "pass": r.passed,
        "terms_used": r.terms_used,
    }
    if timings:
        out["elapsed_ms"] = round(r.elapsed_ms, 1)
    return out


def _emit_reports(reports, args) -> int:
    failed = [r for r in reports if not r.passed]
    if args.json:
        payload = {
            "reports": [_report_dict(r, args.timings) for r in reports],
            "summary": {
                "total": len(reports),
                "passed": len(reports) - len(failed),
                "failed": len(failed),
                "digits": args.digits,
            },
        }
        print(json.dumps(payload, indent=2))
    else:
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            line = (f"{status} {r.id:<20} residual "
                    f"{mpmath.nstr(r.abs_residual, 3):>10} terms {r.terms_used}")
            if args.timings:
                line += f" ({r.elapsed_ms:.0f} ms)"
            print(line)
        print(f"{len(reports) - len(failed)}/{len(reports)} passed "
              f"at {args.digits} digits")
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def cmd_verify(args) -> int:
    ctx = _context(args)
    try:
        corpus = ident.load_corpus(args.corpus)
    except (ident.CorpusError, OSError) as exc:
        print(f"corpus error: {exc}", file=sys.stderr)
        return EXIT_CORPUS
    cache = ident.ConstantsCache(args.cache) if args.cache else None
    if args.id is not None:
        try:
            corpus.identity(args.id)
        except KeyError:
            try:
                corpus.instance(args.id)
            except KeyError:
                print(f"unknown id: {args.id}", file=sys.stderr)
                return EXIT_USAGE
        reports = ident.verify_all(ctx, args.id, corpus, cache, args.parallelism)
    else:
        pattern = args.filter  # None selects everything
        reports = ident.verify_all(ctx, pattern, corpus, cache, args.parallelism)
        if pattern is not None and not reports:
            print(f"filter matched nothing: {pattern}", file=sys.stderr)
            return EXIT_USAGE
    return _emit_reports(reports, args)


def cmd_lvalue(args) -> int:
    ctx = _context(args)
    try:
        value = dirichlet_l2(args.d, ctx)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _print_value(f"L_{args.d}(2)", value, args)
    return EXIT_OK


def _parse_point(text: str):
    return CMPoint.from_string(text)


def cmd_epstein(args) -> int:
    ctx = _context(args)
    try:
        z = _parse_point(args.z)
        if args.gamma0:
            value = epstein_gamma0(z.to_point(ctx), args.gamma0, ctx).value
            label = f"E_gamma0({args.gamma0})({args.z}, 2)"
        else:
            value = epstein_sl2(z.to_point(ctx), ctx)
            label = f"E({args.z}, 2)"
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _print_value(label, value, args)
    return EXIT_OK


def cmd_alpha(args) -> int:
    ctx = _context(args)
    try:
        z = _parse_point(args.z)
        value = alpha_n(z.to_point(ctx), args.N, ctx)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _print_value(f"alpha_{args.N}({args.z})", value, args)
    return EXIT_OK


def cmd_constants(args) -> int:
    ctx = _context(args)
    try:
        z = _parse_point(args.z)
        c1, c2, m = series_constants_from_cm(z, args.N, ctx)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps({
            "z": args.z, "N": args.N, "digits": args.digits,
            "c1": format_ap(c1, args.digits),
            "c2": format_ap(c2, args.digits),
            "m": format_ap(m, args.digits),
        }, indent=2))
    else:
        print(f"c1 = {format_ap(c1, args.digits)}")
        print(f"c2 = {format_ap(c2, args.digits)}")
        print(f"m  = {format_ap(m, args.digits)}")
    return EXIT_OK


def _print_value(label, value, args) -> None:
    text = format_ap(value, args.digits)
    if args.json:
        print(json.dumps({"label": label, "digits": args.digits, "value": text},
                         indent=2))
    else:
        print(f"{label} = {text}")


# -- table reconstruction --------------------------------------------------

def load_tables(path=None) -> list:
    """Rows of the three CM-point tables, with exact expected cell values."""
    if path is None:
        text = resources.files(__package__).joinpath("data/tables.json") \
            .read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    data = json.loads(text)
    tables = []
    for tab in data["tables"]:
        rows = []
        for row in tab["rows"]:
            cells = {}
            for name in ("c1", "c2", "m"):
                cells[name] = QuadExpr(
                    ident._quad_from_json(row[name]["num"], "tables"),
                    ident._quad_from_json(row[name]["den"], "tables"),
                )
            rows.append({"point": CMPoint.from_string(row["point"]),
                         "text": row["point"], "cells": cells})
        tables.append({"table": tab["table"], "level": tab["level"], "rows": rows})
    return tables


def check_table(table_no: int, ctx: PrecisionContext):
    """Recompute every cell of one table; yields (row_text, cell, residual)."""
    for tab in load_tables():
        if tab["table"] != table_no:
            continue
        level = tab["level"]
        for row in tab["rows"]:
            z = row["point"].to_point(ctx)
            with ctx.working():
                c1, c2, m = series_constants_from_cm(z, level, ctx)
                y = z.imag
                computed = {"c1": c1 / 2 / y, "c2": c2 / y, "m": m}
                for name in ("c1", "c2", "m"):
                    expected = row["cells"][name].embed(ctx)
                    residual = abs(computed[name] - expected)
                    yield row["text"], name, residual
        return
    raise DomainError(f"no table {table_no}")


def cmd_tables(args) -> int:
    ctx = _context(args)
    tol = mpf(10) ** (-(args.digits - 10))
    results = []
    try:
        for row_text, cell, residual in check_table(args.table, ctx):
            results.append((row_text, cell, residual, bool(residual < tol)))
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.json:
        print(json.dumps({
            "table": args.table, "digits": args.digits,
            "cells": [
                {"row": r, "cell": c, "residual": mpmath.nstr(res, 3), "pass": ok}
                for r, c, res, ok in results
            ],
            "pass": all(ok for *_, ok in results),
        }, indent=2))
    else:
        for r, c, res, ok in results:
            print(f"{'PASS' if ok else 'FAIL'} table {args.table} "
                  f"{r:<24} {c}: residual {mpmath.nstr(res, 3)}")
        print(f"table {args.table}: "
              f"{sum(ok for *_, ok in results)}/{len(results)} cells match")
    return EXIT_OK if all(ok for *_, ok in results) else EXIT_VERIFY_FAILED


# -- argument parsing ------------------------------------------------------

def _default_digits() -> int:
    raw = os.environ.get(ENV_DIGITS)
    if raw is not None:
        try:
            return max(10, int(raw))
        except ValueError:
            pass
    return 40


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="updownlab",
                     description="High-precision verification of fast "
                                 "converging irrational series.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--digits", type=int, default=_default_digits(),
                       help="significant digits (default 40, or $%s)" % ENV_DIGITS)
        p.add_argument("--json", action="store_true", help="JSON output")

    p = sub.add_parser("verify", help="verify corpus identities")
    common(p)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--all", action="store_true", help="verify everything")
    group.add_argument("--id", help="verify a single record")
    group.add_argument("--filter", help="glob over record ids")
    p.add_argument("--corpus", default=None, help="corpus JSON path")
    p.add_argument("--cache", default=None, help="constants cache path")
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--timings", action="store_true",
                   help="include elapsed milliseconds in reports")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lvalue", help="Dirichlet L-value L_d(2)")
    common(p)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_lvalue)

    p = sub.add_parser("epstein", help="Epstein zeta value at s = 2")
    common(p)
    p.add_argument("--z", required=True, help="CM point, e.g. \"i\" or "
                   "\"1/2+1/7*sqrt(7)*i\"")
    p.add_argument("--gamma0", type=int, choices=(2, 3, 4), default=None,
                   help="level-N coset sum instead of the full sum")
    p.set_defaults(func=cmd_epstein)

    p = sub.add_parser("alpha", help="modular invariant alpha_N(z)")
    common(p)
    p.add_argument("--z", required=True)
    p.add_argument("--N", type=int, choices=(2, 3, 4), required=True)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("constants", help="series constants (c1, c2, m) at z")
    common(p)
    p.add_argument("--z", required=True)
    p.add_argument("--N", type=int, choices=(2, 3, 4), required=True)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("tables", help="reconstruct one of the three tables")
    common(p)
    p.add_argument("--table", type=int, choices=(1, 2, 3), required=True)
    p.set_defaults(func=cmd_tables)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if getattr(args, "digits", 40) < 10:
        print("digits must be >= 10", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
