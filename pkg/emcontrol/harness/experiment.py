"""Seeded experiment execution: isolated runs, aggregation and on-disk artifacts"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import repeat
from pathlib import Path

import numpy as np

from emcontrol import __version__
from emcontrol.agents import build_agent, run_episode
from emcontrol.core.config import settings
from emcontrol.core.exceptions import DivergenceError
from emcontrol.core.logging_config import get_logger
from emcontrol.envs import CorridorEnv, CounterexampleMdp, Environment, RunStreams
from emcontrol.features import FeatureMap, build_feature_map
from emcontrol.harness.config_loader import config_hash
from emcontrol.harness.curves import CurveRepository, LearningCurve, recovery_bins
from emcontrol.schemas import EnvConfig, ExperimentConfig, FeatureConfig


logger = get_logger(__name__)


@dataclass
class RunResult:
    """Outcome of one seeded run of one agent"""
    label: str
    run: int
    seed: int
    returns: np.ndarray = field(repr=False)
    truncated_episodes: int = 0
    planning_skipped: int = 0
    feature_collisions: int = 0
    diverged: bool = False
    error: str | None = None

    def stats(self) -> dict:
        summary = asdict(self)
        summary.pop("returns")
        summary.pop("label")
        return summary


def build_environment(config: EnvConfig, rng: np.random.Generator) -> Environment:
    if config.env == "counterexample":
        return CounterexampleMdp(rng, b_reward=config.counterexample_b_reward, step_cap=config.step_cap)
    return CorridorEnv(
        rng,
        length=config.corridor_length,
        slip_prob=config.slip_prob,
        goal_side=config.goal_side,
        phase_length=config.phase_length,
        step_cap=config.step_cap,
    )


def build_features(config: FeatureConfig, env: Environment, rng: np.random.Generator) -> FeatureMap:
    return build_feature_map(config.features, env.num_states, rng, d=config.feature_d, k=config.feature_k)


def run_single(config: ExperimentConfig, label: str, run: int) -> RunResult:
    """
    Play `experiment.episodes` episodes of agent `label` with seed seed_base + run.

    Each run builds its own environment, features, agent and buffer from
    independent streams of that seed. Divergence ends the run early and is
    reported in the result instead of raised.
    """
    seed = config.experiment.seed_base + run
    streams = RunStreams.from_seed(seed)
    env = build_environment(config.env, streams.env)
    features = build_features(config.features, env, streams.features)
    agent = build_agent(config.agents[label], env, features, streams.explore, streams.buffer)

    result = RunResult(
        label=label,
        run=run,
        seed=seed,
        returns=np.full(config.experiment.episodes, np.nan),
        feature_collisions=features.collisions,
    )
    try:
        for episode in range(config.experiment.episodes):
            outcome = run_episode(agent, env, features)
            result.returns[episode] = outcome.total_reward
            result.truncated_episodes += int(outcome.truncated)
            result.planning_skipped += outcome.planning_skipped
    except DivergenceError as e:
        result.diverged = True
        result.error = str(e)
        logger.warning(f"[{label}] run {run} (seed {seed}) diverged at episode {episode}: {e}")
        return result

    if result.truncated_episodes:
        logger.warning(f"[{label}] run {run}: {result.truncated_episodes} episode(s) truncated")
    return result


def execute_runs(config: ExperimentConfig, label: str, workers: int = 1) -> list[RunResult]:
    """All runs of one agent, in run order regardless of completion order"""
    runs = range(config.experiment.runs)
    workers = max(1, min(workers, config.experiment.runs))
    if workers == 1:
        return [run_single(config, label, run) for run in runs]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(run_single, repeat(config), repeat(label), runs))


def _curve_from_results(config: ExperimentConfig, label: str, results: list[RunResult]) -> LearningCurve:
    diverged = [r for r in results if r.diverged]
    if diverged and not config.experiment.exclude_diverged:
        raise DivergenceError(
            f"[{label}] {len(diverged)} run(s) diverged (first: seed {diverged[0].seed}: {diverged[0].error}); "
            "set exclude_diverged = true to drop them"
        )
    kept = [r for r in results if not r.diverged]
    if not kept:
        raise DivergenceError(f"[{label}] every run diverged")
    if diverged:
        logger.warning(f"[{label}] excluding {len(diverged)} diverged run(s)")

    return LearningCurve(
        label=label,
        per_run=np.vstack([r.returns for r in kept]),
        bin_size=config.experiment.bin_size,
        run_ids=tuple(r.run for r in kept),
    )


def output_dir_for(config: ExperimentConfig, output_dir: str | Path | None = None) -> Path:
    if output_dir is not None:
        return Path(output_dir)
    if config.experiment.output:
        return Path(config.experiment.output)
    return Path(settings.results_dir) / config.experiment.name


def write_metadata(
    out_dir: Path,
    config: ExperimentConfig,
    results: dict[str, list[RunResult]],
) -> Path:
    """Config echo, its content hash and per-run statistics"""
    metadata = {
        "emcontrol_version": __version__,
        "config_hash": config_hash(config),
        "config": config.model_dump(mode="json"),
        "runs": {label: [r.stats() for r in label_results] for label, label_results in results.items()},
    }
    path = out_dir / "metadata.json"
    path.write_text(json.dumps(metadata, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def run_experiment(
    config: ExperimentConfig,
    output_dir: str | Path | None = None,
    workers: int | None = None,
    write: bool = True,
) -> dict[str, LearningCurve]:
    """
    Run every configured agent over seeds seed_base .. seed_base + runs - 1.

    Returns one LearningCurve per agent label. With `write` the per-run,
    binned and standard-error CSVs plus metadata.json go to the output
    directory.

    Raises:
        DivergenceError: If a run diverged and exclude_diverged is not set
    """
    workers = workers or settings.workers
    out_dir = output_dir_for(config, output_dir)
    exp = config.experiment
    logger.info(
        f"Experiment {exp.name!r}: {len(config.agents)} agent(s), {exp.runs} run(s) x {exp.episodes} episodes, "
        f"{workers} worker(s)"
    )

    curves: dict[str, LearningCurve] = {}
    all_results: dict[str, list[RunResult]] = {}
    for label in config.agents:
        results = execute_runs(config, label, workers)
        curve = _curve_from_results(config, label, results)
        curves[label] = curve
        all_results[label] = results
        logger.info(f"[{label}] final bin mean {curve.final_bin_mean:.3f} +/- {curve.final_bin_se:.3f} (SE)")

        phase_length = config.env.phase_length
        if phase_length and phase_length % exp.bin_size == 0:
            recoveries = recovery_bins(curve.binned, phase_length // exp.bin_size)
            logger.info(f"[{label}] bins to recover after each switch: {recoveries}")

        if write:
            CurveRepository.write_curve(out_dir, curve)

    if write:
        out_dir.mkdir(parents=True, exist_ok=True)
        write_metadata(out_dir, config, all_results)
        logger.info(f"Results written to {out_dir}")
    return curves
