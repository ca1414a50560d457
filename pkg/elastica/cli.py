"""
Command-line interface.

    python -m elastica transform curve.json -a 1 -b 0.5 q.csv
    python -m elastica geodesic c1.json c2.json -a 1 -b 0.25 --svg path.svg
    python -m elastica classify data/ --table --jobs 4

Exit codes: 0 success, 2 bad input or usage, 3 geometry errors,
4 numerical non-convergence.
"""

import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .classifier import TABLE_RHOS, format_report, format_table, load_dataset, save_dataset, write_matrix_csv
from .curve_files import (
    ingest_points,
    load_curve,
    read_transform_csv,
    save_curve,
    write_transform_csv,
)
from .errors import ElasticaError, InputError
from .models import ElasticParams
from .pipeline import build_pipeline
from .samples import SYNTHETIC_KINDS, make_synthetic_dataset
from .transform import inverse
from .visualizer import MATPLOTLIB_AVAILABLE, GeodesicFigure, configure_logging


def _add_params(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-a", type=float, default=1.0, help="bending weight a (default 1)")
    parser.add_argument("-b", type=float, default=0.5, help="stretching weight b (default 0.5)")


def _add_shape_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--closed", action="store_true", help="treat curves as closed")
    parser.add_argument("--fixed-length", action="store_true",
                        help="rescale curves to unit length (sphere geometry)")
    parser.add_argument("--grid", type=int, default=128, help="matching grid cells")
    parser.add_argument("--window", type=int, default=4, help="largest lattice step of the warp")
    parser.add_argument("--seed-stride", type=int, default=1,
                        help="spacing of starting vertices tried for closed curves")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="elastica",
                                     description="F_{a,b} transforms for elastic shape analysis of plane curves")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="report pipeline events")
    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser("transform", help="write the transform of a curve as CSV")
    cmd.add_argument("input")
    _add_params(cmd)
    cmd.add_argument("output")

    cmd = commands.add_parser("invert", help="rebuild a curve from a transform CSV")
    cmd.add_argument("input")
    _add_params(cmd)
    cmd.add_argument("output")
    cmd.add_argument("--closed", action="store_true", help="remove the endpoint gap")

    for name, text in (("geodesic", "geodesic path and distance between two curves"),
                       ("distance", "elastic shape distance between two curves")):
        cmd = commands.add_parser(name, help=text)
        cmd.add_argument("file1")
        cmd.add_argument("file2")
        _add_params(cmd)
        _add_shape_options(cmd)
        if name == "geodesic":
            cmd.add_argument("--steps", type=int, default=7, help="points along the path")
            cmd.add_argument("--svg", help="write an SVG figure of the path")
            cmd.add_argument("--out-dir", help="write one curve file per path point")

    cmd = commands.add_parser("close", help="project an open curve onto the closed curves")
    cmd.add_argument("input")
    _add_params(cmd)
    cmd.add_argument("output")
    cmd.add_argument("--tol", type=float, help="closure tolerance (default 1e-6 (2b)^2)")
    cmd.add_argument("--max-iter", type=int, default=200)

    cmd = commands.add_parser("classify", help="leave-one-out nearest-neighbour classification")
    cmd.add_argument("root")
    _add_params(cmd)
    _add_shape_options(cmd)
    cmd.add_argument("--method", choices=("elastic", "arclength"), default="elastic")
    cmd.add_argument("--table", action="store_true",
                     help="arclength baseline plus rho in 1/4, 1/2, 1, 2, 3, 4 (a = 1)")
    cmd.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    cmd.add_argument("--report", help="text report file")
    cmd.add_argument("--matrix", help="distance matrix CSV")

    cmd = commands.add_parser("ingest", help="convert a whitespace point list to a curve file")
    cmd.add_argument("source")
    cmd.add_argument("dest")
    cmd.add_argument("--name")
    cmd.add_argument("--closed", action="store_true")

    cmd = commands.add_parser("synth", help="write a synthetic two-class dataset")
    cmd.add_argument("root")
    cmd.add_argument("--kind", choices=sorted(SYNTHETIC_KINDS), default="separable")
    cmd.add_argument("--per-class", type=int, default=10)
    cmd.add_argument("--seed", type=int, default=0)
    return parser


def _options(args) -> dict:
    options = {
        "closed": args.closed,
        "fixed_length": args.fixed_length,
        "grid_n": args.grid,
        "window": args.window,
        "seed_stride": args.seed_stride,
    }
    if getattr(args, "steps", None) is not None:
        options["steps"] = args.steps
    return options


def cmd_transform(args) -> int:
    pipeline = build_pipeline(args.a, args.b, verbose=args.verbose or None)
    q = pipeline.transform_curve(load_curve(args.input))
    write_transform_csv(q, args.output)
    return 0


def cmd_invert(args) -> int:
    q = read_transform_csv(args.input, ElasticParams(args.a, args.b))
    curve = inverse(q, closed=args.closed, name=Path(args.output).stem)
    save_curve(curve, args.output)
    return 0


def _load_pair(args):
    closed = True if args.closed else None
    return load_curve(args.file1, closed=closed), load_curve(args.file2, closed=closed)


def cmd_geodesic(args) -> int:
    if args.svg and not MATPLOTLIB_AVAILABLE:
        raise InputError("--svg needs matplotlib, which is not installed")
    pipeline = build_pipeline(args.a, args.b, verbose=args.verbose or None, **_options(args))
    c1, c2 = _load_pair(args)
    path = pipeline.geodesic(c1, c2)
    print(f"dist={path.distance:.4f}")
    if args.out_dir:
        out_dir = Path(args.out_dir)
        for index, curve in enumerate(path.points):
            save_curve(curve, out_dir / f"step_{index:02d}.json")
    if args.svg:
        GeodesicFigure().save(path, args.svg)
    return 0


def cmd_distance(args) -> int:
    pipeline = build_pipeline(args.a, args.b, verbose=args.verbose or None, **_options(args))
    c1, c2 = _load_pair(args)
    print(f"dist={pipeline.distance(c1, c2):.4f}")
    return 0


def cmd_close(args) -> int:
    pipeline = build_pipeline(args.a, args.b, verbose=args.verbose or None,
                              projection_tol=args.tol, max_iter=args.max_iter)
    curve, residual = pipeline.close_curve(load_curve(args.input))
    save_curve(curve, args.output)
    print(f"residual={residual:.3e}")
    return 0


def cmd_classify(args) -> int:
    dataset = load_dataset(Path(args.root))
    pipeline = build_pipeline(args.a, args.b, verbose=args.verbose or None, **_options(args))
    jobs = max(1, args.jobs)
    if args.table:
        text = format_table(pipeline.rho_table(dataset, TABLE_RHOS, jobs=jobs))
    else:
        matrix, report = pipeline.classify(dataset, method=args.method, jobs=jobs)
        text = format_report(report)
        if args.matrix:
            write_matrix_csv(matrix, dataset.names, Path(args.matrix))
    print(text)
    if args.report:
        Path(args.report).write_text(text + "\n")
    return 0


def cmd_ingest(args) -> int:
    curve = ingest_points(args.source, name=args.name, closed=args.closed)
    save_curve(curve, args.dest)
    print(f"{curve.name}: {curve.segment_count + 1} vertices")
    return 0


def cmd_synth(args) -> int:
    dataset = make_synthetic_dataset(args.kind, per_class=args.per_class, seed=args.seed)
    written = save_dataset(dataset, Path(args.root))
    print(f"wrote {len(written)} curves in {len(dataset.classes)} classes to {args.root}")
    return 0


COMMANDS = {
    "transform": cmd_transform,
    "invert": cmd_invert,
    "geodesic": cmd_geodesic,
    "distance": cmd_distance,
    "close": cmd_close,
    "classify": cmd_classify,
    "ingest": cmd_ingest,
    "synth": cmd_synth,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except ElasticaError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
