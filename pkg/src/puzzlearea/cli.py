"""Command-line interface: ``puzzlearea predict|simulate|validate|plot``.

Exit codes: 0 success (or the puzzle fits the table), 2 table too small,
64 usage error, 65 bad data, 66 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .empirical import builtin_dataset, load_csv, validate
from .errors import DataError, DomainError
from .layout_io import layout_csv, layout_svg
from .model import SQRT3, PuzzleSpec, model_breakdown, table_fits, unassembled_area
from .packing import STRATEGIES, SimParams, build_layout, measure_layout, ratio_statistics
from .plot import render_svg, report_plot_spec

EXIT_OK = 0
EXIT_NO_FIT = 2
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_IO = 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _style(text, code, stream):
    if "NO_COLOR" in os.environ or not stream.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _banner(args, out):
    if not args.no_banner and not getattr(args, "json", False):
        out.write(_style(f"puzzlearea {__version__}", "1", out) + "\n")


def _table_size(text):
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}")
    try:
        w, h = float(parts[0]), float(parts[1])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}") from None
    return w, h


def _spec_from_args(args):
    has_area = args.area is not None
    has_w, has_h = args.width is not None, args.height is not None
    if has_area and (has_w or has_h):
        raise UsageError("give either --area or --width/--height, not both")
    if has_w != has_h:
        raise UsageError("--width and --height must be given together")
    if not has_area and not has_w:
        raise UsageError("one of --area or --width/--height is required")
    pieces = args.pieces if args.pieces is not None else 1
    if has_area:
        return PuzzleSpec(pieces=pieces, assembled_area=args.area)
    return PuzzleSpec.from_dims(pieces, args.width, args.height)


def cmd_predict(args, out):
    spec = _spec_from_args(args)
    bd = model_breakdown(spec)
    fit = table_fits(spec, *args.table) if args.table else None
    if args.json:
        doc = {"assembled_area": spec.assembled_area, "unassembled_area": bd.unassembled_area}
        if args.pieces is not None:
            doc["pieces"] = spec.pieces
            doc["breakdown"] = bd.as_dict()
        if fit is not None:
            doc["table"] = {
                "width": args.table[0],
                "height": args.table[1],
                "area": fit.table_area,
                "fits": fit.fits,
                "margin": fit.margin,
            }
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        _banner(args, out)
        out.write(f"assembled area      {spec.assembled_area:12.1f} cm²\n")
        if args.pieces is not None:
            out.write(f"pieces              {spec.pieces:12d}\n")
            out.write(f"piece area          {bd.piece_area:12.1f} cm²\n")
            out.write(f"piece edge          {bd.piece_edge:12.3f} cm\n")
            out.write(f"circle diameter     {bd.circle_diameter:12.3f} cm\n")
            out.write(f"hexagon area        {bd.hexagon_area:12.1f} cm²\n")
            out.write(f"spread per piece    {bd.per_piece_spread_area:12.1f} cm²\n")
        out.write(f"unassembled area    {bd.unassembled_area:12.1f} cm²\n")
        out.write(f"ratio               {SQRT3:12.4f}\n")
        if fit is not None:
            verdict = "fits" if fit.fits else "does not fit"
            out.write(
                f"table {args.table[0]:g}x{args.table[1]:g}  {fit.table_area:12.1f} cm²  "
                f"{verdict}, margin {fit.margin:.1f} cm²\n"
            )
    if fit is not None and not fit.fits:
        return EXIT_NO_FIT
    return EXIT_OK


def _simulate_one(job):
    pieces, area, params, keep_layout = job
    layout = build_layout(pieces, area, params)
    return measure_layout(layout, area), (layout if keep_layout else None)


def run_simulations(pieces, area, base, runs, jobs=1, keep_last=False):
    """One run per seed ``base.seed .. base.seed + runs - 1``, results in seed order."""
    tasks = []
    for k in range(runs):
        params = SimParams(
            strategy=base.strategy,
            seed=base.seed + k,
            candidate_angles=base.candidate_angles,
            radial_step=base.radial_step,
            jitter=base.jitter,
            gap=base.gap,
        )
        tasks.append((pieces, area, params, keep_last and k == runs - 1))
    if jobs > 1 and runs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_simulate_one, tasks))
    else:
        outcomes = [_simulate_one(t) for t in tasks]
    return [o[0] for o in outcomes], outcomes[-1][1]


def _results_csv(results):
    buf = io.StringIO()
    keys = list(results[0].as_dict())
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in results:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.as_dict().items()})
    return buf.getvalue()


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def cmd_simulate(args, out):
    if args.runs < 1:
        raise DomainError("--runs must be >= 1")
    if args.jobs < 1:
        raise DomainError("--jobs must be >= 1")
    base = SimParams(
        strategy=args.strategy,
        seed=args.seed,
        candidate_angles=args.candidate_angles,
        radial_step=args.radial_step,
        jitter=args.jitter,
        gap=args.gap,
    )
    if args.pieces < 1:
        raise DomainError("--pieces must be >= 1")
    keep = bool(args.svg or args.layout_csv)
    results, last = run_simulations(args.pieces, args.area, base, args.runs, args.jobs, keep)
    stats = ratio_statistics(results)
    if args.svg:
        _write(args.svg, layout_svg(last))
    if args.layout_csv:
        _write(args.layout_csv, layout_csv(last))
    if args.csv:
        _write(args.csv, _results_csv(results))
    if args.json:
        doc = {
            "strategy": args.strategy,
            "pieces": args.pieces,
            "assembled_area": args.area,
            "predicted_ratio": SQRT3,
            "runs": [r.as_dict() for r in results],
            "ellipse_ratio": vars(stats.ellipse),
            "hull_ratio": vars(stats.hull),
        }
        out.write(json.dumps(doc, indent=2) + "\n")
        return EXIT_OK
    _banner(args, out)
    seeds = f"{args.seed}" if args.runs == 1 else f"{args.seed}..{args.seed + args.runs - 1}"
    out.write(
        f"strategy {args.strategy}  pieces {args.pieces}  "
        f"assembled {args.area:.1f} cm²  runs {args.runs}  seeds {seeds}\n"
    )
    out.write(f"{'':16}{'mean':>8}{'std':>8}{'min':>8}{'max':>8}\n")
    for name, s in (("ellipse ratio", stats.ellipse), ("hull ratio", stats.hull)):
        out.write(f"{name:<16}{s.mean:8.4f}{s.stddev:8.4f}{s.min:8.4f}{s.max:8.4f}\n")
    out.write(f"{'model sqrt(3)':<16}{SQRT3:8.4f}\n")
    return EXIT_OK


def _load_records(args):
    if args.data is None:
        return builtin_dataset()
    try:
        return load_csv(args.data)
    except OSError as exc:
        raise IOError(f"cannot read {args.data}: {exc.strerror or exc}") from exc


def cmd_validate(args, out):
    records = _load_records(args)
    if not records:
        raise DataError("no measurement rows")
    report = validate(records)
    if args.json:
        out.write(report.to_json())
    else:
        _banner(args, out)
        out.write(report.to_text())
    return EXIT_OK


def cmd_plot(args, out):
    records = _load_records(args)
    if not records:
        raise DataError("no measurement rows to plot")
    spec = report_plot_spec(validate(records), width_px=args.width_px, height_px=args.height_px)
    _write(args.out, render_svg(spec))
    _banner(args, out)
    out.write(f"wrote {args.out} ({len(spec.points)} points)\n")
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--no-banner", action="store_true", default=argparse.SUPPRESS, help="omit the version line"
    )
    parser = _Parser(prog="puzzlearea", description=__doc__.splitlines()[0])
    parser.add_argument("--no-banner", action="store_true", help="omit the version line")
    parser.add_argument("--version", action="version", version=f"puzzlearea {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("predict", parents=[common], help="predicted spread area")
    p.add_argument("--area", type=float, help="assembled area in cm²")
    p.add_argument("--width", type=float, help="assembled width in cm")
    p.add_argument("--height", type=float, help="assembled height in cm")
    p.add_argument("--pieces", type=int, help="piece count (adds the per-piece breakdown)")
    p.add_argument("--table", type=_table_size, metavar="WxH", help="table size in cm, e.g. 90x70")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("simulate", parents=[common], help="simulate piece layouts")
    p.add_argument("--pieces", type=int, required=True)
    p.add_argument("--area", type=float, required=True, help="assembled area in cm²")
    p.add_argument("--strategy", choices=STRATEGIES, default="greedy-radial")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1, help="worker processes for multiple runs")
    p.add_argument("--candidate-angles", type=int, default=64)
    p.add_argument("--radial-step", type=float, default=0.05, help="march step as a fraction of d")
    p.add_argument("--jitter", type=float, default=0.0, help="hex jitter in [0, 1)")
    p.add_argument("--gap", type=float, default=0.0, help="grid gap in cm")
    p.add_argument("--svg", help="write the last layout as SVG")
    p.add_argument("--csv", help="write per-run results as CSV")
    p.add_argument("--layout-csv", help="write the last layout's piece poses as CSV")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", parents=[common], help="compare measurements with sqrt(3)")
    p.add_argument("--data", help="measurement CSV (default: bundled nine-puzzle table)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("plot", parents=[common], help="SVG plot of spread vs assembled area")
    p.add_argument("--data", help="measurement CSV (default: bundled nine-puzzle table)")
    p.add_argument("--out", required=True, help="SVG output path")
    p.add_argument("--width-px", type=int, default=800)
    p.add_argument("--height-px", type=int, default=600)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"puzzlearea: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"puzzlearea: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DomainError as exc:
        print(f"puzzlearea: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"puzzlearea: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
