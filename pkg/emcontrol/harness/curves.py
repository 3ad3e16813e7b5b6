"""Learning-curve aggregation and CSV persistence"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from emcontrol.core.exceptions import UsageError
from emcontrol.core.logging_config import get_logger


logger = get_logger(__name__)

RUNS_HEADER = ("episode", "run", "total_reward")
BINNED_HEADER = ("bin_start", "mean_total_reward")
BINNED_SE_HEADER = ("bin_start", "se_total_reward")


def _as_matrix(per_run: np.ndarray | list) -> np.ndarray:
    matrix = np.atleast_2d(np.asarray(per_run, dtype=float))
    if matrix.ndim != 2 or matrix.size == 0:
        raise UsageError(f"Expected a non-empty runs x episodes matrix, got shape {matrix.shape}")
    return matrix


def _num_bins(episodes: int, bin_size: int) -> int:
    if bin_size < 1:
        raise UsageError(f"bin_size must be >= 1, got {bin_size}")
    if bin_size > episodes:
        raise UsageError(f"bin_size ({bin_size}) exceeds the number of episodes ({episodes})")
    leftover = episodes % bin_size
    if leftover:
        logger.warning(f"Dropping a partial bin of {leftover} episode(s) (bin_size {bin_size})")
    return episodes // bin_size


def bin_curve(per_run: np.ndarray | list, bin_size: int) -> np.ndarray:
    """Mean across runs for each episode, then mean over consecutive bins"""
    matrix = _as_matrix(per_run)
    num_bins = _num_bins(matrix.shape[1], bin_size)
    episode_means = matrix.mean(axis=0)[: num_bins * bin_size]
    return episode_means.reshape(num_bins, bin_size).mean(axis=1)


def bin_standard_error(per_run: np.ndarray | list, bin_size: int) -> np.ndarray:
    """Standard error across runs of each run's bin mean (zeros for a single run)"""
    matrix = _as_matrix(per_run)
    num_bins = _num_bins(matrix.shape[1], bin_size)
    runs = matrix.shape[0]
    if runs < 2:
        return np.zeros(num_bins)
    run_bins = matrix[:, : num_bins * bin_size].reshape(runs, num_bins, bin_size).mean(axis=2)
    return run_bins.std(axis=0, ddof=1) / np.sqrt(runs)


def recovery_bins(binned: np.ndarray, bins_per_phase: int, fraction: float = 0.9) -> list[int | None]:
    """
    Bins needed after each goal switch to get back to `fraction` of the
    last pre-switch bin.

    A value of 1 means the first post-switch bin already qualifies. None
    means the curve did not recover before the next switch (or the data
    ended).
    """
    if bins_per_phase < 1:
        raise UsageError(f"bins_per_phase must be >= 1, got {bins_per_phase}")
    binned = np.asarray(binned, dtype=float)
    recoveries: list[int | None] = []
    for switch in range(bins_per_phase, len(binned), bins_per_phase):
        reference = binned[switch - 1]
        threshold = reference - (1.0 - fraction) * abs(reference)
        phase = binned[switch : switch + bins_per_phase]
        hits = np.nonzero(phase >= threshold)[0]
        recoveries.append(int(hits[0]) + 1 if len(hits) else None)
    return recoveries


@dataclass(frozen=True)
class LearningCurve:
    """Per-run episode returns of one agent and their binned summary"""
    label: str
    per_run: np.ndarray
    bin_size: int
    run_ids: tuple[int, ...]

    @property
    def runs(self) -> int:
        return self.per_run.shape[0]

    @property
    def episodes(self) -> int:
        return self.per_run.shape[1]

    @property
    def binned(self) -> np.ndarray:
        return bin_curve(self.per_run, self.bin_size)

    @property
    def binned_se(self) -> np.ndarray:
        return bin_standard_error(self.per_run, self.bin_size)

    @property
    def bin_starts(self) -> np.ndarray:
        return np.arange(self.episodes // self.bin_size) * self.bin_size

    @property
    def final_bin_mean(self) -> float:
        return float(self.binned[-1])

    @property
    def final_bin_se(self) -> float:
        return float(self.binned_se[-1])


class CurveRepository:
    """Reads and writes learning-curve CSV files"""

    @staticmethod
    def write_runs(path: str | Path, per_run: np.ndarray, run_ids: tuple[int, ...] | list[int]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as file:
            writer = csv.writer(file, lineterminator="\n")
            writer.writerow(RUNS_HEADER)
            for run, returns in zip(run_ids, per_run):
                for episode, total in enumerate(returns):
                    writer.writerow([episode, run, repr(float(total))])
        return path

    @staticmethod
    def read_runs(path: str | Path) -> tuple[np.ndarray, tuple[int, ...]]:
        """
        Read a per-run CSV back into a runs x episodes matrix.

        Raises:
            UsageError: If the header is wrong or runs have different lengths
        """
        path = Path(path)
        by_run: dict[int, dict[int, float]] = {}
        with open(path, newline="", encoding="utf-8") as file:
            reader = csv.reader(file)
            header = tuple(next(reader, ()))
            if header != RUNS_HEADER:
                raise UsageError(f"{path}: expected header {','.join(RUNS_HEADER)}, got {','.join(header)}")
            for episode, run, total in reader:
                by_run.setdefault(int(run), {})[int(episode)] = float(total)

        if not by_run:
            raise UsageError(f"{path}: no data rows")
        run_ids = tuple(sorted(by_run))
        lengths = {len(by_run[run]) for run in run_ids}
        if len(lengths) != 1:
            raise UsageError(f"{path}: runs have different episode counts {sorted(lengths)}")
        per_run = np.array([[by_run[run][ep] for ep in sorted(by_run[run])] for run in run_ids])
        return per_run, run_ids

    @staticmethod
    def write_binned(
        path: str | Path,
        bin_starts: np.ndarray,
        values: np.ndarray,
        header: tuple[str, str] = BINNED_HEADER,
    ) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="", encoding="utf-8") as file:
            writer = csv.writer(file, lineterminator="\n")
            writer.writerow(header)
            for start, value in zip(bin_starts, values):
                writer.writerow([int(start), repr(float(value))])
        return path

    @staticmethod
    def read_binned(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
        path = Path(path)
        with open(path, newline="", encoding="utf-8") as file:
            reader = csv.reader(file)
            header = next(reader, None)
            if header is None or len(header) != 2 or header[0] != "bin_start":
                raise UsageError(f"{path}: not a binned curve CSV")
            rows = [(int(start), float(value)) for start, value in reader]
        if not rows:
            raise UsageError(f"{path}: no data rows")
        starts, values = zip(*rows)
        return np.array(starts), np.array(values)

    @classmethod
    def write_curve(cls, out_dir: str | Path, curve: LearningCurve) -> list[Path]:
        """Write <label>.runs.csv, <label>.binned.csv and <label>.binned_se.csv"""
        out_dir = Path(out_dir)
        starts = curve.bin_starts
        return [
            cls.write_runs(out_dir / f"{curve.label}.runs.csv", curve.per_run, curve.run_ids),
            cls.write_binned(out_dir / f"{curve.label}.binned.csv", starts, curve.binned),
            cls.write_binned(out_dir / f"{curve.label}.binned_se.csv", starts, curve.binned_se, BINNED_SE_HEADER),
        ]
