"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 data error. Results go to
stdout (or ``--out``); diagnostics go to stderr only.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Sequence

from .anonymity import DEFAULT_EQ_TOL, assess_pair
from .data_io import series_from_csv, synth_random_ints
from .errors import DataError, LeakGaugeError
from .mic import DEFAULT_BUDGET_EXPONENT, mic
from .perm_entropy import DEFAULT_PLATEAU_TOL
from .pipeline import evaluate, load_config, render_csv, render_json, render_text, scan
from .randomizers import MECHANISMS, RandomizerConfig, randomize
from .svg import line_chart

SEED_ENV = "LEAKGAUGE_SEED"
EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

log = logging.getLogger("leakgauge")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        seed = int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None
    if not 0 <= seed < 2**64:
        raise UsageError(f"{SEED_ENV}={raw} is not a 64-bit unsigned integer")
    return seed


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _pattern_length(text: str):
    if text == "auto":
        return text
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError(f"pattern length must be >= 2 or 'auto', got {text}")
    return v


def _nonneg_float(text: str) -> float:
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="leakgauge", description="Estimate privacy-leak risk of a randomizer's output.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats, default):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--out", type=Path, help="write results here instead of stdout")

    a = sub.add_parser("assess", help="score a randomized series against its original")
    a.add_argument("--original", type=Path, required=True)
    a.add_argument("--randomized", type=Path, required=True)
    a.add_argument("--column", help="column to use from each file (default: only column, else PCA)")
    a.add_argument("--n", type=_pattern_length, default="auto", help="pattern length or 'auto'")
    a.add_argument("--n-min", type=int, default=2)
    a.add_argument("--n-max", type=int, default=12)
    a.add_argument("--plateau-tol", type=_nonneg_float, default=DEFAULT_PLATEAU_TOL)
    a.add_argument("--eq-tol", type=_nonneg_float, default=DEFAULT_EQ_TOL)
    common(a, ("json", "text", "csv"), "json")

    s = sub.add_parser("scan", help="entropy against pattern length")
    s.add_argument("--input", type=Path, required=True)
    s.add_argument("--column")
    s.add_argument("--n-min", type=int, default=2)
    s.add_argument("--n-max", type=int, default=12)
    s.add_argument("--plateau-tol", type=_nonneg_float, default=DEFAULT_PLATEAU_TOL)
    s.add_argument("--svg", type=Path, help="also write an SVG line chart")
    common(s, ("tsv", "json", "text"), "tsv")

    m = sub.add_parser("mic", help="approximate maximal information coefficient")
    m.add_argument("--input", type=Path, help="table holding both variables (use with --x/--y)")
    m.add_argument("--x")
    m.add_argument("--y")
    m.add_argument("--original", type=Path, help="x series file (paired with --randomized)")
    m.add_argument("--randomized", type=Path, help="y series file")
    m.add_argument("--budget-exponent", type=_positive_float, default=DEFAULT_BUDGET_EXPONENT)
    m.add_argument("--cap", type=_positive_int, help="largest k and l to try")
    common(m, ("json", "text"), "json")

    r = sub.add_parser("randomize", help="apply a reference randomizer")
    r.add_argument("--input", type=Path, required=True)
    r.add_argument("--column")
    r.add_argument("--mechanism", choices=MECHANISMS, default="exponential")
    r.add_argument("--epsilon", type=_positive_float, default=0.337)
    r.add_argument("--delta", type=float, default=0.1)
    r.add_argument("--sensitivity", type=_positive_float, default=1.0)
    r.add_argument("--bins", type=int, default=100)
    r.add_argument("--seed", type=int)
    common(r, ("csv",), "csv")

    y = sub.add_parser("synth", help="uniform random integers")
    y.add_argument("--count", type=_positive_int, default=10000)
    y.add_argument("--lo", type=int, default=1)
    y.add_argument("--hi", type=int, default=100)
    y.add_argument("--seed", type=int)
    common(y, ("csv",), "csv")

    e = sub.add_parser("evaluate", help="batch evaluation from a TOML config")
    e.add_argument("--config", type=Path, required=True)
    e.add_argument("--workers", type=_positive_int, default=1)
    common(e, ("text", "csv", "json"), "text")
    return p


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        try:
            out.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise DataError(f"{out}: cannot write: {exc.strerror or exc}") from exc


def _cmd_assess(args) -> str:
    original = series_from_csv(args.original, column=args.column)
    randomized = series_from_csv(args.randomized, column=args.column)
    n = args.n
    if n == "auto":
        n = scan(original, args.n_min, min(args.n_max, original.N), args.plateau_tol).chosen_n
        log.info("auto pattern length: %d", n)
    rep = assess_pair(original, randomized, n, args.eq_tol)
    if args.format == "json":
        return rep.to_json() + "\n"
    if args.format == "csv":
        d = rep.to_dict()
        d["flags"] = ";".join(d["flags"])
        return ",".join(d) + "\n" + ",".join(repr(v) if isinstance(v, float) else str(v) for v in d.values()) + "\n"
    flags = ", ".join(rep.flags) or "none"
    return (
        f"records            {rep.N}\n"
        f"pattern length     {rep.n}\n"
        f"degree original    {rep.d1:.6f}\n"
        f"degree randomized  {rep.d2:.6f}\n"
        f"gamma              {rep.gamma:.6g}\n"
        f"r1                 {rep.r1:.6f}\n"
        f"epsilon            {rep.epsilon:.6f}\n"
        f"risk               {rep.direction.value}\n"
        f"flags              {flags}\n"
    )


def _cmd_scan(args) -> str:
    series = series_from_csv(args.input, column=args.column)
    curve = scan(series, args.n_min, args.n_max, args.plateau_tol)
    if args.svg is not None:
        chart = line_chart(curve.points, title="Entropy by pattern length", marker=curve.chosen_n)
        _emit(chart, args.svg)
    if args.format == "tsv":
        return curve.to_tsv()
    if args.format == "json":
        doc = {"chosen_n": curve.chosen_n, "plateau_tol": curve.plateau_tol,
               "curve": [{"n": n, "entropy_bits": h} for n, h in curve.points]}
        return json.dumps(doc, indent=2) + "\n"
    lines = [f"n={n:<3d} H={h:.4f} bits{'  <- chosen' if n == curve.chosen_n else ''}" for n, h in curve.points]
    return "\n".join(lines) + "\n"


def _cmd_mic(args) -> str:
    if args.input is not None:
        if args.x is None or args.y is None or args.original or args.randomized:
            raise UsageError("mic: --input needs --x and --y, and excludes --original/--randomized")
        x = series_from_csv(args.input, column=args.x)
        y = series_from_csv(args.input, column=args.y)
    elif args.original is not None and args.randomized is not None:
        x = series_from_csv(args.original)
        y = series_from_csv(args.randomized)
    else:
        raise UsageError("mic: give --input with --x/--y, or --original with --randomized")
    if x.N != y.N:
        raise DataError(f"x has {x.N} records, y has {y.N}; points must be paired by position")
    res = mic(x.values, y.values, args.budget_exponent, args.cap)
    if args.format == "json":
        return res.to_json() + "\n"
    b = res.best
    return (f"MIC {res.mic:.6f}  (grid {b.k}x{b.l}, x {b.x_kind}, y {b.y_kind}; "
            f"B(n)={res.budget}, n={res.n}, {len(res.table)} grids)\n")


def _cmd_randomize(args) -> str:
    cfg = RandomizerConfig(kind=args.mechanism, epsilon=args.epsilon, delta=args.delta,
                           sensitivity=args.sensitivity, candidate_bins=args.bins, seed=args.seed)
    series = series_from_csv(args.input, column=args.column)
    return randomize(series, cfg).to_csv()


def _cmd_synth(args) -> str:
    return synth_random_ints(args.count, args.lo, args.hi, args.seed).to_csv()


def _cmd_evaluate(args) -> str:
    cfg = load_config(args.config)
    ev = evaluate(cfg.specs, cfg.eq_tol, cfg.n_range, cfg.plateau_tol, workers=args.workers)
    for name, err in ev.failures:
        print(f"leakgauge: dataset {name!r} failed: {err}", file=sys.stderr)
    if args.format == "json":
        return render_json(ev.rows, ev.failures)
    if args.format == "csv":
        return render_csv(ev.rows)
    return render_text(ev.rows)


COMMANDS = {
    "assess": _cmd_assess,
    "scan": _cmd_scan,
    "mic": _cmd_mic,
    "randomize": _cmd_randomize,
    "synth": _cmd_synth,
    "evaluate": _cmd_evaluate,
}


def _validate(args) -> None:
    if getattr(args, "n_min", None) is not None and not 2 <= args.n_min <= args.n_max:
        raise UsageError(f"need 2 <= --n-min <= --n-max, got {args.n_min} and {args.n_max}")
    if hasattr(args, "seed"):
        if args.seed is None:
            args.seed = _default_seed()
        elif not 0 <= args.seed < 2**64:
            raise UsageError(f"--seed must be a 64-bit unsigned integer, got {args.seed}")
    if args.command == "synth" and not args.lo < args.hi:
        raise UsageError(f"need --lo < --hi, got {args.lo} and {args.hi}")
    if args.command == "randomize" and args.bins < 2:
        raise UsageError(f"--bins must be >= 2, got {args.bins}")


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="leakgauge: %(message)s", stream=sys.stderr)
    try:
        _emit(COMMANDS[args.command](args), args.out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except LeakGaugeError as exc:
        print(f"leakgauge: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main() -> None:
    sys.exit(run())
