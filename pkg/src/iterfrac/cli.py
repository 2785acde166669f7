"""Command-line front end.

    iterfrac iterate  --preset geometric --s 3 --order 6 --method matrix
    iterfrac iterate  --preset quad --s 1/2 --order 10 --all-methods
    iterfrac iterate  --preset "moebius(4)" --s 1/2 --mode numeric --table
    iterfrac itlog    --preset "moebius(2)" --order 6 --form discrete
    iterfrac bell     --n 4 --k 2 --values 1,2,3
    iterfrac qbinom   --s 4 --p 2 --q 2
    iterfrac qfact    --n 3 --q 2
    iterfrac validate --order 8
    iterfrac bench    --orders 6,8 --exponents 2,3

Output is JSON unless ``--table`` is given.  Exit status: 0 success, 1 domain
error (the error class name goes to stderr), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Callable

from . import errors
from .bell import partial_bell_exp, partial_bell_ord
from .iterate import METHODS, applicable_methods, generator_exp, iterate
from .itlog import FORMS, itlog
from .oracles import (
    oracle_compose_iterate,
    oracle_functional_root,
    oracle_moebius,
    verify_partition_lemma,
)
from .qcalc import QContext, alt_sum_identity, hockey_stick, q_binomial, q_factorial
from .scalar import EXACT, ExactField, Field, NumericField, parse_exponent
from .series import DEFAULT_ORDER, Series, check_order, comp_inverse, load_series, preset
from .triangle import CoeffTriangle

EXPONENT_HELP = (
    "iteration exponent: an integer (3, -2), an exact fraction (1/2), or a "
    "numeric complex (0.3, 0.7+0.1i; numeric mode only)"
)


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- formatting


def _show(field: Field, x) -> str:
    if isinstance(field, ExactField):
        return str(Fraction(x))
    x = field.ctx.mpc(x)
    if x.imag == 0:
        return field.ctx.nstr(x.real, 15)
    return field.ctx.nstr(x, 15)


def _render_table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    line = lambda r: "  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip()  # noqa: E731
    return "\n".join([line(header), line(["-" * w for w in widths])] + [line(r) for r in rows])


def _render_triangle(T: CoeffTriangle) -> str:
    header = ["n\\k"] + [str(k) for k in range(T.size + 1)]
    rows = [[str(n)] + [_show(T.field, T[n, k]) for k in range(n + 1)] + [""] * (T.size - n) for n in range(T.size + 1)]
    return _render_table(header, rows)


def _emit(obj, table: str | None, as_table: bool) -> None:
    if as_table and table is not None:
        print(table)
    else:
        print(json.dumps(obj, indent=2))


# ---------------------------------------------------------------- arguments


def _field(args) -> Field:
    if args.mode == "exact":
        return EXACT
    return NumericField(args.bits, args.tol) if args.tol is not None else NumericField(args.bits)


def _series(args, field: Field) -> Series:
    N = check_order(args.order)
    if args.series is not None:
        return load_series(args.series, N, field)
    return preset(args.preset, N, field)


def _scalar(text: str, field: Field):
    if isinstance(field, ExactField):
        return field.coerce(text)
    return field.coerce(text)


def _max_discrepancy(a: CoeffTriangle, b: CoeffTriangle):
    if isinstance(a.field, ExactField):
        return max((abs(x - y) for r, s in zip(a.rows, b.rows) for x, y in zip(r, s)), default=0)
    return a.max_rel_deviation(b)


def _agree(a: CoeffTriangle, b: CoeffTriangle, tol) -> bool:
    if isinstance(a.field, ExactField):
        return a == b
    return a.close(b, tol)


# ---------------------------------------------------------------- subcommands


def cmd_iterate(args) -> int:
    field = _field(args)
    f = _series(args, field)
    s = parse_exponent(args.s, field)
    N = args.order
    if args.all_methods:
        methods = applicable_methods(f, s, N)
        if not methods:
            raise UsageError("no method applies to this series and exponent")
        tables = {m: iterate(f, s, N, m) for m in methods}
        ref = tables[methods[0]]
        worst = max(_max_discrepancy(ref, T) for T in tables.values())
        report = {
            "s": args.s,
            "order": N,
            "mode": field.mode,
            "reference": methods[0],
            "max_discrepancy": _show(field, worst) if isinstance(field, ExactField) else float(worst),
            "methods": {m: [field.to_json(c) for c in T.to_series().coeffs[1:]] for m, T in tables.items()},
        }
        header = ["method"] + [f"c{n}" for n in range(1, N + 1)]
        rows = [[m] + [_show(field, c) for c in T.to_series().coeffs[1:]] for m, T in tables.items()]
        _emit(report, _render_table(header, rows) + f"\nmax discrepancy: {report['max_discrepancy']}", args.table)
        return 0
    method = args.method or "auto"
    T = iterate(f, s, N, method)
    out = {
        "s": args.s,
        "order": N,
        "mode": field.mode,
        "method": method,
        "ordinary": [field.to_json(c) for c in T.to_series().coeffs[1:]],
        "exponential": [field.to_json(T[n, 1]) for n in range(1, N + 1)],
    }
    if args.triangle:
        out["triangle"] = T.to_json()
    _emit(out, _render_triangle(T), args.table)
    return 0


def cmd_itlog(args) -> int:
    field = _field(args)
    f = _series(args, field)
    res = itlog(f, args.order, args.form)
    out = res.to_json()
    header = ["n", "exponential body"]
    rows = [[str(n), _show(field, c)] for n, c in enumerate(res.body)]
    _emit(out, f"multiplier: {out['multiplier']}\n" + _render_table(header, rows), args.table)
    return 0


def cmd_bell(args) -> int:
    field = _field(args)
    values = [_scalar(v, field) for v in args.values.split(",") if v.strip()]
    if len(values) < args.n - args.k + 1:
        raise UsageError(f"--values needs at least n-k+1 = {args.n - args.k + 1} entries")
    out = {
        "n": args.n,
        "k": args.k,
        "exponential": field.to_json(partial_bell_exp(args.n, args.k, values)),
        "ordinary": field.to_json(partial_bell_ord(args.n, args.k, values)),
    }
    table = _render_table(["n", "k", "B", "B_hat"], [[str(args.n), str(args.k), str(out["exponential"]), str(out["ordinary"])]])
    _emit(out, table, args.table)
    return 0


def cmd_qbinom(args) -> int:
    field = _field(args)
    ctx = QContext(_scalar(args.q, field), field)
    s = parse_exponent(args.s, field)
    val = q_binomial(s, args.p, ctx)
    out = {"s": args.s, "p": args.p, "q": args.q, "value": field.to_json(val)}
    _emit(out, _show(field, val), args.table)
    return 0


def cmd_qfact(args) -> int:
    field = _field(args)
    ctx = QContext(_scalar(args.q, field), field)
    val = q_factorial(args.n, ctx)
    out = {"n": args.n, "q": args.q, "value": field.to_json(val)}
    _emit(out, _show(field, val), args.table)
    return 0


# ---------------------------------------------------------------- validate


def _battery(N: int, bits: int | None, tol) -> tuple[dict, dict]:
    """Method-versus-oracle matrix and standalone identity checks."""
    num = NumericField(bits) if tol is None else NumericField(bits, tol)

    def compose_case(name, s):
        f = preset(name, N)
        return f, s, oracle_compose_iterate(f, s, N)

    cases: dict[str, Callable] = {
        "geometric s=3": lambda: compose_case("geometric", 3),
        "quad s=2": lambda: compose_case("quad", 2),
        "moebius(2) s=3": lambda: compose_case("moebius(2)", 3),
        "moebius(1/3) s=0": lambda: compose_case("moebius(1/3)", 0),
        "expm1 s=2": lambda: compose_case("expm1", 2),
        "geometric s=-1": lambda: (preset("geometric", N), -1, comp_inverse(preset("geometric", N), N)),
        "quad s=1/2": lambda: (preset("quad", N), Fraction(1, 2), oracle_functional_root(preset("quad", N), 2, N)),
        "moebius(4) s=1/2 numeric": lambda: (
            preset("moebius(4)", N, num),
            Fraction(1, 2),
            oracle_moebius(4, Fraction(1, 2), N, num),
        ),
        "moebius(0.7+0.1i) s=0.3 numeric": lambda: (
            preset("moebius(0.7+0.1i)", N, num),
            num.coerce("0.3"),
            oracle_moebius(num.coerce("0.7+0.1i"), num.coerce("0.3"), N, num),
        ),
    }
    matrix = {}
    for name in sorted(cases):
        f, s, want = cases[name]()
        row = {}
        usable = set(applicable_methods(f, s, N))
        for m in METHODS:
            if m not in usable:
                row[m] = "n/a"
                continue
            try:
                got = iterate(f, s, N, m).to_series()
                row[m] = "pass" if got.close(want, tol) else "FAIL"
            except errors.IterfracError as exc:
                row[m] = f"FAIL ({type(exc).__name__})"
        matrix[name] = row

    def partition():
        return all(verify_partition_lemma(s, k, n) for s in range(1, 4) for k in range(1, 3) for n in range(k, k + 4))

    def itlog_forms():
        f = Series.of([0, 2, 1, -1, Fraction(1, 2)] + [0] * (N - 4))
        return itlog(f, N, "pochhammer") == itlog(f, N, "discrete")

    def itlog_geometric():
        return list(itlog(preset("geometric", N)).ordinary()) == [0, 0, 1] + [0] * (N - 2)

    def group_law():
        f = preset("moebius(0.7+0.1i)", N, num)
        s, t = num.coerce("0.3"), num.coerce("0.7")
        lhs = iterate(f, s, N, "tambs") @ iterate(f, t, N, "tambs")
        return lhs.max_rel_deviation(iterate(f, 1, N, "matrix")) < 1e-20

    def generator():
        f = preset("moebius(4)", N, num)
        return generator_exp(f, Fraction(1, 2), N).max_rel_deviation(iterate(f, Fraction(1, 2), N, "qschroder")) < 1e-18

    def q_identities():
        ok = True
        for q in (Fraction(2), Fraction(-1, 3)):
            ctx = QContext(q)
            for b in range(5):
                for a in range(5):
                    lhs = sum(
                        (q_binomial(a, p, ctx) * ctx.power(p * (p - 1) // 2) * (-1) ** p for p in range(b + 1)),
                        Fraction(0),
                    )
                    ok &= lhs == alt_sum_identity(a, b, ctx)
            for n in range(2, 7):
                for ell in range(1, n):
                    lhs = sum(
                        (q_binomial(p - 1, ell - 1, ctx) * ctx.power(-ell * p) for p in range(ell, n)),
                        Fraction(0),
                    )
                    ok &= lhs == hockey_stick(n, ell, ctx)
        return ok

    checks = {
        "generator exp vs qschroder": generator,
        "group law s+t=1": group_law,
        "itlog geometric = x^2": itlog_geometric,
        "itlog pochhammer = discrete": itlog_forms,
        "partition lemma": partition,
        "q identities": q_identities,
    }
    results = {}
    for name in sorted(checks):
        try:
            results[name] = "pass" if checks[name]() else "FAIL"
        except errors.IterfracError as exc:
            results[name] = f"FAIL ({type(exc).__name__})"
    return matrix, results


def cmd_validate(args) -> int:
    N = check_order(args.order)
    matrix, checks = _battery(N, args.bits, args.tol)
    ok = all(not v.startswith("FAIL") for row in matrix.values() for v in row.values())
    ok &= all(v == "pass" for v in checks.values())
    out = {"order": N, "methods": matrix, "checks": checks, "passed": ok}
    header = ["case"] + list(METHODS)
    rows = [[name] + [row[m] for m in METHODS] for name, row in matrix.items()]
    table = _render_table(header, rows) + "\n\n" + _render_table(["check", "result"], [[k, v] for k, v in checks.items()])
    _emit(out, table + f"\n\n{'PASSED' if ok else 'FAILED'}", args.table)
    return 0 if ok else 1


# ---------------------------------------------------------------- bench


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of integers, got {text!r}") from None


def cmd_bench(args) -> int:
    field = _field(args)
    report = []
    for N in _int_list(args.orders):
        check_order(N)
        f = preset(args.preset, N, field) if args.series is None else load_series(args.series, N, field)
        for text in args.exponents.split(","):
            s = parse_exponent(text, field)
            methods = applicable_methods(f, s, N)
            tables = {m: iterate(f, s, N, m) for m in methods}
            ref = tables[methods[0]]
            for m, T in tables.items():
                if not _agree(ref, T, args.tol):
                    raise errors.MethodDisagreement(f"{m} differs from {methods[0]} at N={N}, s={text}")
            timings = {}
            for m in methods:
                best = float("inf")
                for _ in range(args.repeat):
                    t0 = time.perf_counter()
                    iterate(f, s, N, m)
                    best = min(best, time.perf_counter() - t0)
                timings[m] = best
            report.append({"order": N, "s": text.strip(), "seconds": timings})
    header = ["N", "s"] + list(METHODS)
    rows = [
        [str(r["order"]), r["s"]] + [f"{r['seconds'][m]:.4f}" if m in r["seconds"] else "-" for m in METHODS]
        for r in report
    ]
    _emit({"mode": field.mode, "agreement": "checked", "results": report}, _render_table(header, rows), args.table)
    return 0


# ---------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser, series: bool = True, order: bool = True) -> None:
    if series:
        src = p.add_mutually_exclusive_group()
        src.add_argument("--series", help="path to a JSON series file, or inline JSON")
        src.add_argument(
            "--preset",
            default="geometric",
            help="geometric (x/(1-x)), quad (x+x^2), moebius(q) (qx/(1-x)), linear(q) (qx), expm1 (e^x-1)",
        )
    if order:
        p.add_argument("--order", type=int, default=DEFAULT_ORDER, help="truncation order N (max 40)")
    p.add_argument("--mode", choices=("exact", "numeric"), default="exact")
    p.add_argument("--bits", type=int, default=None, help="numeric mantissa bits (default 128 or $ITERFRAC_BITS)")
    p.add_argument("--tol", type=float, default=None, help="relative tolerance for numeric comparisons")
    p.add_argument("--table", action="store_true", help="aligned human-readable output instead of JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iterfrac",
        description="Coefficients of discrete and fractional iterates of formal power series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("iterate", help="coefficients of f^s")
    _common(p)
    p.add_argument("--s", required=True, help=EXPONENT_HELP)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--method", choices=METHODS + ("auto",), help="formula to use (default: auto)")
    g.add_argument("--all-methods", action="store_true", help="run every applicable method and report discrepancies")
    p.add_argument("--triangle", action="store_true", help="include the full coefficient triangle in the JSON")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("itlog", help="iterative logarithm of f")
    _common(p)
    p.add_argument("--form", choices=FORMS, default=None, help="default: classical if f'(0)=1, else pochhammer")
    p.set_defaults(func=cmd_itlog)

    p = sub.add_parser("bell", help="partial Bell polynomials B_{n,k} and their ordinary variant")
    _common(p, series=False, order=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--values", required=True, help="comma-separated arguments x_1,x_2,...")
    p.set_defaults(func=cmd_bell)

    p = sub.add_parser("qbinom", help="q-binomial coefficient with scalar upper argument")
    _common(p, series=False, order=False)
    p.add_argument("--s", required=True, help=EXPONENT_HELP)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(func=cmd_qbinom)

    p = sub.add_parser("qfact", help="q-factorial")
    _common(p, series=False, order=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", required=True)
    p.set_defaults(func=cmd_qfact)

    p = sub.add_parser("validate", help="cross-check every method against the brute-force oracles")
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--bits", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--table", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="time every applicable method after checking they agree")
    _common(p, order=False)
    p.add_argument("--orders", default="6,8,10", help="comma-separated truncation orders")
    p.add_argument("--exponents", default="2,3", help="comma-separated exponents")
    p.add_argument("--repeat", type=int, default=3, help="timing repetitions (best is reported)")
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on usage errors
    try:
        return args.func(args)
    except errors.IterfracError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"iterfrac: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
