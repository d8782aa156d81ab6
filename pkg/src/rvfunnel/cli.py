"""Command line entry point.

Exit codes: 0 success, 1 usage or configuration error, 2 funnel violation
(run) or failed initial membership (check), 3 trade-off bound violated (check).
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .controller import FunnelViolation
from .csvio import write_boundary, write_reference, write_table, write_trajectory
from .feasibility import feasibility_report
from .integrate import StepFailure
from .scenario import ScenarioError, load_scenario
from .sim import simulate

OUTPUT_ENV = "RVFUNNEL_OUTPUT_DIR"
EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_CONDITION = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _output_dir(flag, sc) -> Path:
    if flag:
        return Path(flag)
    if os.environ.get(OUTPUT_ENV):
        return Path(os.environ[OUTPUT_ENV])
    return Path(sc.output_dir or "out")


def run_scenario(path, out_dir=None, plots=None) -> int:
    try:
        sc = load_scenario(path)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = _output_dir(out_dir, sc)
    out.mkdir(parents=True, exist_ok=True)
    status = EXIT_OK
    try:
        rec = simulate(sc)
    except FunnelViolation as exc:
        rec = exc.record
        print(f"{sc.name}: {exc}", file=sys.stderr)
        status = EXIT_VIOLATION
    except StepFailure as exc:
        print(f"{sc.name}: integration failed: {exc}", file=sys.stderr)
        if getattr(exc, "record", None) is not None:
            write_trajectory(exc.record, out / "trajectory.csv")
        return EXIT_USAGE
    write_trajectory(rec, out / "trajectory.csv")
    if (sc.plots if plots is None else plots) and len(rec) > 1:
        from .plots import plot_record
        plot_record(rec, out, sc.saturation)
    if status == EXIT_OK:
        print(f"{sc.name}: completed {rec.t[-1]:.3f} s, {len(rec)} samples -> {out}")
    return status


def _run_batch(directory: Path, out_root: Path | None) -> int:
    files = sorted(p for p in directory.iterdir()
                   if p.suffix in (".scenario", ".toml") and p.is_file())
    if not files:
        print(f"error: no scenario files in {directory}", file=sys.stderr)
        return EXIT_USAGE
    root = out_root or Path(os.environ.get(OUTPUT_ENV) or "out")
    with ProcessPoolExecutor() as pool:
        codes = list(pool.map(run_scenario, files, [root / f.stem for f in files]))
    if EXIT_USAGE in codes:
        return EXIT_USAGE
    return max(codes)


def cmd_run(args) -> int:
    target = Path(args.file)
    if args.batch:
        if not target.is_dir():
            print(f"error: --batch expects a directory, got {target}", file=sys.stderr)
            return EXIT_USAGE
        return _run_batch(target, Path(args.output) if args.output else None)
    return run_scenario(target, args.output)


def cmd_check(args) -> int:
    try:
        sc = load_scenario(args.file)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rep = feasibility_report(sc, grid=args.grid)
    print(rep.summary())
    margin = write_table(_output_dir(args.output, sc) / "margin.csv", ["t", "lhs"],
                         np.column_stack([rep.times, rep.margin]))
    print(f"margin series -> {margin}")
    if not rep.initial_ok:
        return EXIT_VIOLATION
    if not rep.satisfied:
        return EXIT_CONDITION
    return EXIT_OK


def cmd_dump_reference(args) -> int:
    try:
        sc = load_scenario(args.file)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    write_reference(sc.path, args.output or sys.stdout, step=args.step, horizon=sc.horizon)
    return EXIT_OK


def cmd_dump_boundary(args) -> int:
    try:
        sc = load_scenario(args.file)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.channel not in (0, 1, 2, 3):
        print("error: --channel must be 0, 1, 2 or 3", file=sys.stderr)
        return EXIT_USAGE
    write_boundary(sc.schedules[args.channel], args.output or sys.stdout, step=args.step,
                   horizon=sc.horizon)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rvfunnel", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="simulate a scenario and write CSV and SVG output")
    p.add_argument("file")
    p.add_argument("-o", "--output", help=f"output directory (default: ${OUTPUT_ENV} or [output].dir)")
    p.add_argument("--batch", action="store_true",
                   help="treat FILE as a directory and run every scenario in it")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="report initial membership and the trade-off bound")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="directory for margin.csv")
    p.add_argument("--grid", type=float, default=1e-2, help="time grid step (s)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("dump-reference", help="write the sampled reference as CSV")
    p.add_argument("file")
    p.add_argument("-o", "--output", help="CSV path (default: stdout)")
    p.add_argument("--step", type=float, default=0.01)
    p.set_defaults(func=cmd_dump_reference)

    p = sub.add_parser("dump-boundary", help="write one funnel boundary as CSV")
    p.add_argument("file")
    p.add_argument("--channel", type=int, required=True)
    p.add_argument("-o", "--output", help="CSV path (default: stdout)")
    p.add_argument("--step", type=float, default=0.01)
    p.set_defaults(func=cmd_dump_boundary)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # downstream closed the pipe (e.g. ``| head``)
        sys.stderr.close()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
