"""Experiment execution, aggregation, plotting and the command line"""
from emcontrol.harness.config_loader import ConfigLoader, config_hash, load_config, parse_config
from emcontrol.harness.curves import CurveRepository, LearningCurve, bin_curve, bin_standard_error, recovery_bins
from emcontrol.harness.experiment import RunResult, run_experiment, run_single
from emcontrol.harness.plotting import plot_svg, render_svg
from emcontrol.harness.sweep import SweepCell, apply_overrides, best_cells, parse_grid, run_sweep
from emcontrol.harness.verify import CheckResult, run_checks

__all__ = [
    "CheckResult",
    "ConfigLoader",
    "CurveRepository",
    "LearningCurve",
    "RunResult",
    "SweepCell",
    "apply_overrides",
    "best_cells",
    "bin_curve",
    "bin_standard_error",
    "config_hash",
    "load_config",
    "parse_config",
    "parse_grid",
    "plot_svg",
    "recovery_bins",
    "render_svg",
    "run_checks",
    "run_experiment",
    "run_single",
    "run_sweep",
]
