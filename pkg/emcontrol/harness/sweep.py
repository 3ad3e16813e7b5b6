"""Parameter studies over a cartesian grid of config overrides"""
from __future__ import annotations

import csv
import itertools
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from emcontrol.core.exceptions import ConfigError
from emcontrol.core.logging_config import get_logger
from emcontrol.harness.experiment import run_experiment
from emcontrol.schemas import REQUIRED_STEP_SIZES, AgentConfig, ExperimentConfig


logger = get_logger(__name__)


@dataclass(frozen=True)
class SweepCell:
    agent: str
    params: tuple[tuple[str, Any], ...]
    final_mean: float
    final_se: float

    @property
    def key(self) -> str:
        return ",".join(f"{name}={value}" for name, value in self.params)


PLANNING_FIELDS = frozenset({"planning_steps", "planning_cadence"})
STEP_SIZE_FIELDS = frozenset(name for names in REQUIRED_STEP_SIZES.values() for name in names)


def agent_uses(kind: str, name: str) -> bool:
    """Whether an agent of `kind` reads config field `name`"""
    if name in STEP_SIZE_FIELDS:
        return name in REQUIRED_STEP_SIZES[kind]
    if name in PLANNING_FIELDS:
        return kind != "qlearning"
    if name == "model_batch":
        return "model_step_size" in REQUIRED_STEP_SIZES[kind]
    return True


def _parse_value(raw: str) -> Any:
    try:
        return tomllib.loads(f"value = {raw}")["value"]
    except tomllib.TOMLDecodeError:
        return raw


def parse_grid(specs: list[str]) -> dict[str, list[Any]]:
    """["value_step_size=0.001,0.01", ...] -> {"value_step_size": [0.001, 0.01], ...}"""
    grid: dict[str, list[Any]] = {}
    for spec in specs:
        name, sep, values = spec.partition("=")
        if not sep or not name.strip() or not values.strip():
            raise ConfigError(f"Grid entries look like key=v1,v2,...; got {spec!r}")
        grid[name.strip()] = [_parse_value(v.strip()) for v in values.split(",")]
    if not grid:
        raise ConfigError("Sweep grid is empty")
    return grid


def apply_overrides(config: ExperimentConfig, overrides: dict[str, Any]) -> ExperimentConfig:
    """
    Return a copy of `config` with dotted-path overrides applied.

    "env.slip_prob" and "agents.alg1.value_step_size" address one field; a
    bare agent field such as "value_step_size" applies to every agent that
    uses it, so "planning_steps" leaves Q-learning alone.

    Raises:
        ConfigError: If a key names no field, or the result does not validate
    """
    data = config.model_dump()
    for name, value in overrides.items():
        path = name.split(".")
        if len(path) == 1:
            if name not in AgentConfig.model_fields:
                raise ConfigError(f"Unknown sweep key {name!r}")
            sections = [s for s in data["agents"].values() if agent_uses(s["kind"], name)]
            if not sections:
                raise ConfigError(f"No agent in {config.experiment.name!r} uses {name!r}")
            for section in sections:
                section[name] = value
            continue
        target = data
        for part in path[:-1]:
            if not isinstance(target, dict) or part not in target:
                raise ConfigError(f"Unknown sweep key {name!r}")
            target = target[part]
        target[path[-1]] = value
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Override {overrides} gives an invalid config\n{e}") from e


def best_cells(cells: list[SweepCell]) -> dict[str, SweepCell]:
    """Highest final mean per agent; ties go to the lexicographically first cell"""
    best: dict[str, SweepCell] = {}
    for cell in sorted(cells, key=lambda c: (c.agent, c.key)):
        current = best.get(cell.agent)
        if current is None or cell.final_mean > current.final_mean:
            best[cell.agent] = cell
    return best


def run_sweep(
    config: ExperimentConfig,
    grid: dict[str, list[Any]],
    workers: int | None = None,
) -> list[SweepCell]:
    """Run every grid cell under the [sweep] protocol and score its final bin"""
    protocol = config.experiment.model_copy(
        update={
            "episodes": config.sweep.episodes,
            "runs": config.sweep.runs,
            "bin_size": min(config.experiment.bin_size, config.sweep.episodes),
        }
    )
    base = config.model_copy(update={"experiment": protocol})

    names = list(grid)
    cells: list[SweepCell] = []
    for values in itertools.product(*(grid[name] for name in names)):
        params = tuple(zip(names, values))
        cell_config = apply_overrides(base, dict(params))
        logger.info(f"Sweep cell {', '.join(f'{n}={v}' for n, v in params)}")
        curves = run_experiment(cell_config, workers=workers, write=False)
        for label, curve in curves.items():
            cells.append(SweepCell(label, params, curve.final_bin_mean, curve.final_bin_se))
    return cells


def write_sweep_csv(path: str | Path, cells: list[SweepCell]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    best = best_cells(cells)
    names = [name for name, _ in cells[0].params] if cells else []
    with open(path, "w", newline="", encoding="utf-8") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(["agent", *names, "final_mean", "final_se", "best"])
        for cell in cells:
            writer.writerow([
                cell.agent,
                *(value for _, value in cell.params),
                repr(cell.final_mean),
                repr(cell.final_se),
                int(best[cell.agent] is cell),
            ])
    return path
