"""Command-line front end.

Data goes to stdout, diagnostics to stderr.  Exit codes: 0 success, 1 a
requested comparison check failed, 2 usage or domain error, 3 solver
failure, 4 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from .beta_core import DEFAULT_SOLVER, SolverConfig
from .compare import (
    DEFAULT_FRACTIONS,
    FIRST,
    ITEMS,
    cells_to_rows,
    comparison_report,
    figure1_data,
    position,
    reproduce_table1,
)
from .distributions import parse_dist
from .errors import DomainError, SolverError
from .games import DEFAULT_REJECTION_CAP, GameSpec, simulate
from .positions import METHOD_NAMES, method_from_name, piv_for

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_SOLVER = 3
EXIT_IO = 4

# names accepted wherever a single position is given by method
_POSITION_ALIASES = {
    "weibull": "weibull",
    "beta-median": "cran",
    "cran": "cran",
    "beta-median-exact": "exact",
    "exact": "exact",
    "erto": "erto",
    "kerman": "kerman",
    "log-e-over-2": "log-e-over-2",
}


class InputError(Exception):
    """Unreadable or malformed input file."""


# -- output ---------------------------------------------------------------------


def format_value(value, digits=17) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), f".{digits}g")
    return str(value)


def _round_sig(value, digits):
    if isinstance(value, bool) or not isinstance(value, (float, np.floating)):
        return value
    value = float(value)
    if not math.isfinite(value):
        return None
    return float(format(value, f".{digits}g"))


def _jsonable(obj, digits):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v, digits) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    return _round_sig(obj, digits)


def write_csv(out, header, rows, digits):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(row[h], digits) for h in header])


def write_json(out, payload, digits):
    json.dump(_jsonable(payload, digits), out, indent=2, allow_nan=False)
    out.write("\n")


def _parse_cell(text):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_csv(text: str) -> list[dict]:
    """Parse CSV written by this tool back into typed rows."""
    reader = csv.DictReader(io.StringIO(text))
    return [{k: _parse_cell(v) for k, v in row.items()} for row in reader]


# -- argument helpers --------------------------------------------------------------


def _int_list(text):
    """``"10,20,30"`` or ``"10,20,...,150"`` (arithmetic, step from the first two)."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if "..." in parts:
        k = parts.index("...")
        if k != 2 or len(parts) != 4:
            raise argparse.ArgumentTypeError(f"ellipsis form is 'a,b,...,c', got {text!r}")
        try:
            a, b, c = int(parts[0]), int(parts[1]), int(parts[3])
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None
        if b <= a or (c - a) % (b - a):
            raise argparse.ArgumentTypeError(f"{text!r} is not an increasing arithmetic sequence")
        return list(range(a, c + 1, b - a))
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from None


def _fraction_list(text):
    out = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        if part == FIRST:
            out.append(FIRST)
            continue
        try:
            out.append(Fraction(part))
        except (ValueError, ZeroDivisionError):
            raise argparse.ArgumentTypeError(f"bad fraction {part!r}") from None
    return out


def _items(text):
    items = [c for c in text.replace(",", "") if not c.isspace()]
    bad = [c for c in items if c not in ITEMS]
    if bad or not items:
        raise argparse.ArgumentTypeError(f"items must be letters a..j, got {text!r}")
    return items


def _position_arg(text, n, i, cfg):
    try:
        return float(text)
    except ValueError:
        pass
    name = _POSITION_ALIASES.get(text)
    if name is None:
        raise DomainError(
            f"position {text!r} is neither a number nor one of {', '.join(_POSITION_ALIASES)}"
        )
    return position(name, n, i, cfg)


def read_data(path) -> np.ndarray:
    """One finite number per line; blank lines are skipped."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    values = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            x = float(text)
        except ValueError:
            raise InputError(f"{path}:{lineno}: not a number: {text!r}") from None
        if not math.isfinite(x):
            raise InputError(f"{path}:{lineno}: not a finite number: {text!r}")
        values.append(x)
    return np.array(values, dtype=float)


# -- commands ------------------------------------------------------------------------


def cmd_piv(args, cfg, out):
    method = method_from_name(args.method, a=args.a, cfg=cfg)
    piv = piv_for(args.n, method)
    rows = [{"i": k, "p": p} for k, p in enumerate(piv, start=1)]
    if args.format == "json":
        write_json(out, {"n": args.n, "method": args.method, "rows": rows}, args.digits)
    else:
        write_csv(out, ["i", "p"], rows, args.digits)
    return EXIT_OK


def cmd_compare(args, cfg, out):
    items = args.items or list(ITEMS)
    report = comparison_report(args.n, cfg, items)
    if args.format == "json":
        write_json(out, report.to_dict(), args.digits)
    elif args.rows:
        header = ["i", "p_w", "p_b", "diff", "bound_diff", "ratio", "one_minus_ratio"]
        write_csv(out, header, [r.__dict__ for r in report.rows], args.digits)
    else:
        rows = [
            {"item": c.item, "passed": c.passed, "margin": c.margin, "checked": c.checked}
            for c in report.checks.values()
        ]
        write_csv(out, ["item", "passed", "margin", "checked"], rows, args.digits)
    if not report.passed:
        failed = ", ".join(k for k, c in report.checks.items() if not c.passed)
        print(f"comparison checks failed for n={args.n}: {failed}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _emit_cells(args, cells, out):
    rows = cells_to_rows(cells)
    if args.format == "json":
        write_json(out, {"rows": rows}, args.digits)
    else:
        write_csv(out, ["method", "n", "i", "p", "log_p"], rows, args.digits)
    return EXIT_OK


def cmd_table1(args, cfg, out):
    return _emit_cells(args, reproduce_table1(cfg), out)


def cmd_figure1(args, cfg, out):
    fractions = args.fractions if args.fractions is not None else DEFAULT_FRACTIONS
    return _emit_cells(args, figure1_data(args.n_list, fractions, cfg), out)


def cmd_game(args, cfg, out):
    p_a = _position_arg(args.pa, args.n, args.i, cfg)
    p_b = _position_arg(args.pb, args.n, args.i, cfg)
    spec = GameSpec.make(args.game, args.n, args.i, p_a, p_b, args.trials, args.seed)
    report = simulate(spec, workers=args.workers, mode=args.mode, cap=args.cap)
    record = {"game": spec.game_id, "n": spec.idx.n, "i": spec.idx.i, "p_a": p_a, "p_b": p_b,
              "seed": spec.seed, **report.to_dict()}
    record.pop("game_id")
    record.setdefault("mode", None)
    record.setdefault("cap", None)
    if args.format == "json":
        write_json(out, record, args.digits)
    else:
        write_csv(out, list(record), [record], args.digits)
    return EXIT_OK


def cmd_qqplot(args, cfg, out):
    dist = parse_dist(args.dist)
    data = read_data(args.data)
    if data.size == 0:
        raise DomainError(f"{args.data} holds no data")
    x = np.sort(data, kind="stable")
    method = method_from_name(args.method, a=args.a, cfg=cfg)
    piv = piv_for(x.size, method)
    rows = [
        {"i": k, "p": p, "q_theoretical": dist.ppf(p), "x_order_stat": float(xk)}
        for k, (p, xk) in enumerate(zip(piv, x), start=1)
    ]
    if args.format == "json":
        write_json(out, {"n": int(x.size), "method": args.method, "dist": args.dist, "rows": rows}, args.digits)
    else:
        write_csv(out, ["i", "p", "q_theoretical", "x_order_stat"], rows, args.digits)
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _digits(text):
    value = _positive_int(text)
    if value > 17:
        raise argparse.ArgumentTypeError("at most 17 significant digits are meaningful")
    return value


def _add_globals(p, suppress):
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--format", choices=("csv", "json"), default=default if suppress else "csv")
    p.add_argument("--digits", type=_digits, default=default if suppress else 17,
                   help="significant digits for floats (default 17)")
    p.add_argument("--tol", type=float, default=default if suppress else DEFAULT_SOLVER.abs_tol,
                   help="absolute tolerance of the median solvers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="plotpos", description="QQ-plot plotting positions")
    _add_globals(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("piv", parents=[common], help="plotting positions for a sample size")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=METHOD_NAMES + ("exact", "cran"), default="beta-median")
    p.add_argument("--a", type=float, help="shift for --method constant-a")
    p.set_defaults(func=cmd_piv)

    p = sub.add_parser("compare", parents=[common], help="Weibull vs Beta-median checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--items", type=_items, help="subset of a..j, e.g. 'acd'")
    p.add_argument("--rows", action="store_true", help="CSV: print the per-index rows instead of checks")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("table1", parents=[common], help="log positions for n = 2..5")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("figure1", parents=[common], help="log positions at fractions of n")
    p.add_argument("--n-list", type=_int_list, required=True, help="e.g. 50,60,...,150")
    p.add_argument("--fractions", type=_fraction_list,
                   help="comma-separated fractions of n, '1/n' for the first position")
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("game", parents=[common], help="simulate one of the betting games")
    p.add_argument("--game", type=int, choices=(1, 2, 3, 4), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--pa", required=True, help="number in (0, 1) or a method name")
    p.add_argument("--pb", required=True, help="number in (0, 1) or a method name")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("analytic", "rejection"), default="analytic")
    p.add_argument("--cap", type=int, default=DEFAULT_REJECTION_CAP)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("qqplot", parents=[common], help="QQ-plot coordinates for a data file")
    p.add_argument("--data", required=True, help="one number per line")
    p.add_argument("--dist", default="normal", help="uniform[:lo,hi], normal[:mu,sigma], exponential[:rate]")
    p.add_argument("--method", choices=METHOD_NAMES + ("exact", "cran"), default="beta-median")
    p.add_argument("--a", type=float, help="shift for --method constant-a")
    p.set_defaults(func=cmd_qqplot)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = SolverConfig(abs_tol=args.tol)
        return args.func(args, cfg, out)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
