"""Command-line entry point: run, sweep, verify, curves and plot"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from emcontrol import __version__
from emcontrol.core.config import settings
from emcontrol.core.exceptions import ConfigError, DivergenceError, EmControlError
from emcontrol.core.logging_config import get_logger, setup_logging
from emcontrol.harness.config_loader import load_config
from emcontrol.harness.curves import CurveRepository, bin_curve
from emcontrol.harness.experiment import output_dir_for, run_experiment
from emcontrol.harness.plotting import plot_svg
from emcontrol.harness.sweep import best_cells, parse_grid, run_sweep, write_sweep_csv
from emcontrol.harness.verify import CHECK_ALIASES, CHECKS, format_report, run_checks, write_report_csv


logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def _label_for(path: Path) -> str:
    name = path.name
    for suffix in (".runs.csv", ".binned.csv", ".csv"):
        if name.endswith(suffix):
            return name[: -len(suffix)]
    return path.stem


def cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    out_dir = output_dir_for(config, args.output)
    curves = run_experiment(config, output_dir=out_dir, workers=args.workers)
    for label, curve in curves.items():
        print(f"{label}\tfinal bin mean {curve.final_bin_mean:.4f}\tSE {curve.final_bin_se:.4f}")
    if args.plot:
        svg = plot_svg(
            {label: (curve.bin_starts, curve.binned) for label, curve in curves.items()},
            out_dir / "learning_curves.svg",
            title=config.experiment.name,
        )
        print(f"Plot written to {svg}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    cells = run_sweep(config, parse_grid(args.grid), workers=args.workers)
    best = best_cells(cells)
    for cell in cells:
        marker = "*" if best[cell.agent] is cell else " "
        print(f"{marker} {cell.agent}\t{cell.key}\t{cell.final_mean:.4f}\tSE {cell.final_se:.4f}")
    csv_path = Path(args.csv) if args.csv else output_dir_for(config) / "sweep.csv"
    write_sweep_csv(csv_path, cells)
    print(f"Sweep table written to {csv_path}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_checks(args.only)
    print(format_report(results))
    if args.csv:
        write_report_csv(args.csv, results)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILURE


def cmd_curves(args: argparse.Namespace) -> int:
    for name in args.csv_files:
        path = Path(name)
        per_run, _ = CurveRepository.read_runs(path)
        binned = bin_curve(per_run, args.bin)
        starts = [i * args.bin for i in range(len(binned))]
        out_dir = Path(args.output_dir) if args.output_dir else path.parent
        out = CurveRepository.write_binned(out_dir / f"{_label_for(path)}.bin{args.bin}.csv", starts, binned)
        print(out)
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    series = {}
    for name in args.csv_files:
        path = Path(name)
        if path.name.endswith(".runs.csv"):
            per_run, _ = CurveRepository.read_runs(path)
            values = bin_curve(per_run, args.bin)
            starts = [i * args.bin for i in range(len(values))]
        else:
            starts, values = CurveRepository.read_binned(path)
        series[_label_for(path)] = (starts, values)
    out = plot_svg(series, args.output, x_label=args.x_label, y_label=args.y_label, title=args.title)
    print(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emcontrol",
        description="Planning with expectation models for control: experiments and verification",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="Override EMCONTROL_LOG_LEVEL")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run = subparsers.add_parser("run", help="Run an experiment config")
    run.add_argument("config", help="Path to a TOML config or the name of a shipped config")
    run.add_argument("-o", "--output", default=None, help="Output directory (default: from config)")
    run.add_argument("--workers", type=int, default=None, help="Concurrent runs (default: EMCONTROL_WORKERS)")
    run.add_argument("--plot", action="store_true", help="Also write learning_curves.svg")
    run.set_defaults(handler=cmd_run)

    sweep = subparsers.add_parser("sweep", help="Parameter study over a grid of overrides")
    sweep.add_argument("config")
    sweep.add_argument("--grid", action="append", required=True, metavar="KEY=V1,V2,...",
                       help="Values for one parameter; repeat for a cartesian grid")
    sweep.add_argument("--csv", default=None, help="Where to write the sweep table")
    sweep.add_argument("--workers", type=int, default=None)
    sweep.set_defaults(handler=cmd_sweep)

    verify = subparsers.add_parser("verify", help="Run the oracle verification suite")
    verify.add_argument("--only", action="append", choices=[*CHECKS, *CHECK_ALIASES], default=None,
                        help="Run only this check (repeatable)")
    verify.add_argument("--csv", default=None, help="Also write a check,passed,value,detail CSV")
    verify.set_defaults(handler=cmd_verify)

    curves = subparsers.add_parser("curves", help="Re-bin per-run CSVs")
    curves.add_argument("csv_files", nargs="+", metavar="CSV")
    curves.add_argument("--bin", type=int, required=True)
    curves.add_argument("--output-dir", default=None)
    curves.set_defaults(handler=cmd_curves)

    plot = subparsers.add_parser("plot", help="Plot binned or per-run CSVs as SVG")
    plot.add_argument("csv_files", nargs="+", metavar="CSV")
    plot.add_argument("-o", "--output", required=True)
    plot.add_argument("--bin", type=int, default=1, help="Bin size for per-run inputs")
    plot.add_argument("--title", default=None)
    plot.add_argument("--x-label", default="Episode")
    plot.add_argument("--y-label", default="Total reward per episode")
    plot.set_defaults(handler=cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(log_level=args.log_level or settings.log_level, log_file=settings.log_file)

    try:
        return args.handler(args)
    except ConfigError as e:
        logger.error(str(e))
        return EXIT_CONFIG
    except DivergenceError as e:
        logger.error(f"Aborted: {e}")
        return EXIT_FAILURE
    except EmControlError as e:
        logger.error(str(e), exc_info=True)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
