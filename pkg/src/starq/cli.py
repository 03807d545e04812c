"""``starq`` command line.

    starq quantize [-n N] [--lambda L] EXPR
    starq star [-n N] [--route explicit|quant|both] F G
    starq coeffs [-n N] [--max-deg K] [--r-max R]
    starq verify SUITE [-n N] [--geometry projective|conformal:p,q] [--seed S]

Exit codes: 0 ok, 1 verification failure, 2 unparsable symbol, 3 bad
configuration, 4 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import __version__
from .explicit import coeff_table, star_explicit
from .geometry import generators
from .parsing import ParseError, format_symbol, parse_symbol
from .quantization import star_quant, quantize
from .verify import SUITES, Config, run_suite

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3, 4

CSV_HEADER = ["n", "k", "l", "alpha", "beta", "gamma", "delta", "value"]


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors, which would collide with the parse-error code
    def error(self, message):
        raise ConfigError(message)


@dataclass
class RunConfig:
    n: int
    geometry: tuple
    lam: Fraction
    max_deg: int
    fmt: str
    seed: int


def parse_geometry(text: str, n: int) -> tuple:
    if text == "projective":
        return ("projective", n)
    if text.startswith("conformal:"):
        try:
            p, q = (int(v) for v in text[len("conformal:"):].split(","))
        except ValueError:
            raise ConfigError(f"bad geometry {text!r}; expected conformal:p,q") from None
        if p < 0 or q < 0 or p + q != n:
            raise ConfigError(f"conformal signature ({p},{q}) needs p + q = n = {n}")
        return ("conformal", p, q)
    raise ConfigError(f"unknown geometry {text!r}")


def parse_lambda(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad --lambda value {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-n", type=int, default=1, help="dimension of the base (default 1)")
    common.add_argument("--lambda", dest="lam", default="1/2", help="density weight (default 1/2)")
    common.add_argument("--geometry", default="projective", help="projective | conformal:p,q")
    common.add_argument("--max-deg", type=int, default=3, help="degree bound (default 3)")
    common.add_argument("--out", help="write output to FILE instead of stdout")
    common.add_argument("--format", choices=["text", "json", "csv"], help="output format")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    parser = _Parser(prog="starq", description="Invariant star-products on polynomial symbols.")
    parser.add_argument("--version", action="version", version=f"starq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("quantize", parents=[common], help="quantize a symbol")
    q.add_argument("expr")

    s = sub.add_parser("star", parents=[common], help="star-product of two symbols")
    s.add_argument("F")
    s.add_argument("G")
    s.add_argument("--route", choices=["explicit", "quant", "both"], default="explicit")

    c = sub.add_parser("coeffs", parents=[common], help="coefficient table as CSV/JSON")
    c.add_argument("--r-max", type=int, default=3, help="largest alpha+beta+gamma+delta (default 3)")
    c.add_argument("-k", type=int, help="only this xi-degree of the first factor")
    c.add_argument("-l", type=int, help="only this xi-degree of the second factor")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--cases", type=int, default=100, help="random cases per property (default 100)")
    return parser


def _config(args, default_fmt: str) -> RunConfig:
    if args.n < 1:
        raise ConfigError("n must be at least 1")
    if args.max_deg < 1:
        raise ConfigError("--max-deg must be at least 1")
    return RunConfig(
        n=args.n,
        geometry=parse_geometry(args.geometry, args.n),
        lam=parse_lambda(args.lam),
        max_deg=args.max_deg,
        fmt=args.format or default_fmt,
        seed=args.seed,
    )


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def cmd_quantize(args) -> tuple[str, int]:
    cfg = _config(args, "text")
    F = parse_symbol(args.expr, cfg.n)
    A = quantize(F, cfg.lam)
    if cfg.fmt == "json":
        return _dump({
            "schema": 1, "command": "quantize", "n": cfg.n, "lambda": str(cfg.lam),
            "input": format_symbol(F), "symbol": format_symbol(A.base), "operator": A.operator_form(),
        }), EXIT_OK
    if cfg.fmt == "csv":
        raise ConfigError("quantize has no CSV output")
    return f"{format_symbol(A.base)}\noperator: {A.operator_form()}\n", EXIT_OK


def cmd_star(args) -> tuple[str, int]:
    cfg = _config(args, "text")
    if cfg.fmt == "csv":
        raise ConfigError("star has no CSV output")
    F = parse_symbol(args.F, cfg.n)
    G = parse_symbol(args.G, cfg.n)
    results = {}
    if args.route in ("explicit", "both"):
        results["explicit"] = star_explicit(F, G)
    if args.route in ("quant", "both"):
        results["quant"] = star_quant(F, G, Fraction(1, 2))
    equal = len(set(results.values())) == 1
    code = EXIT_OK if equal else EXIT_FAIL
    if cfg.fmt == "json":
        out = {"schema": 1, "command": "star", "n": cfg.n, "route": args.route,
               "F": format_symbol(F), "G": format_symbol(G)}
        out.update({k: format_symbol(v) for k, v in results.items()})
        if args.route == "both":
            out["equal"] = equal
        return _dump(out), code
    if args.route != "both":
        return format_symbol(next(iter(results.values()))) + "\n", code
    lines = [f"{k}: {format_symbol(v)}" for k, v in results.items()]
    lines.append(f"equal: {'true' if equal else 'false'}")
    return "\n".join(lines) + "\n", code


def coeff_rows(n: int, ks, ls, r_max: int) -> list[tuple]:
    rows = []
    for k in ks:
        for l in ls:
            for idx, v in coeff_table(n, k, l, r_max).items():
                rows.append((n, k, l) + idx + (v,))
    rows.sort(key=lambda r: r[:7])
    return rows


def cmd_coeffs(args) -> tuple[str, int]:
    cfg = _config(args, "csv")
    if args.r_max < 0 or (args.k is not None and args.k < 0) or (args.l is not None and args.l < 0):
        raise ConfigError("bounds must be nonnegative")
    ks = [args.k] if args.k is not None else range(cfg.max_deg + 1)
    ls = [args.l] if args.l is not None else range(cfg.max_deg + 1)
    rows = coeff_rows(cfg.n, ks, ls, args.r_max)
    if cfg.fmt == "json":
        return _dump({
            "schema": 1, "command": "coeffs",
            "rows": [dict(zip(CSV_HEADER, r[:7] + (str(r[7]),))) for r in rows],
        }), EXIT_OK
    if cfg.fmt == "text":
        return "".join(f"B^{{{k},{l}}}_{{{a},{b},{c},{d}}} = {v}  (n={n})\n"
                       for n, k, l, a, b, c, d, v in rows), EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r[:7] + (str(r[7]),))
    return buf.getvalue(), EXIT_OK


def cmd_verify(args) -> tuple[str, int]:
    cfg = _config(args, "text")
    if cfg.fmt == "csv":
        raise ConfigError("verify reports are text or JSON")
    if args.cases < 1:
        raise ConfigError("--cases must be at least 1")
    vc = Config(n=cfg.n, geometry=generators(cfg.geometry), lam=cfg.lam,
                max_deg=cfg.max_deg, seed=cfg.seed, cases=args.cases)
    report = run_suite(args.suite, vc)
    code = EXIT_OK if report.passed else EXIT_FAIL
    if cfg.fmt == "json":
        return _dump(report.as_dict()), code
    return report.text() + "\n", code


COMMANDS = {"quantize": cmd_quantize, "star": cmd_star, "coeffs": cmd_coeffs, "verify": cmd_verify}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        text, code = COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"starq: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ParseError as exc:
        print(f"starq: parse error: {exc.diagnostic()}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"starq: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
