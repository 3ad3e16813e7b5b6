import csv

import pytest

from emcontrol.core.exceptions import ConfigError
from emcontrol.harness.config_loader import load_config
from emcontrol.harness.experiment import run_experiment
from emcontrol.harness.sweep import (
    SweepCell,
    agent_uses,
    apply_overrides,
    best_cells,
    parse_grid,
    run_sweep,
    write_sweep_csv,
)
from emcontrol.schemas import SweepSection


def test_parse_grid():
    grid = parse_grid(["value_step_size=0.001,0.01", "env.goal_side=left", "planning_steps=5"])
    assert grid == {
        "value_step_size": [0.001, 0.01],
        "env.goal_side": ["left"],
        "planning_steps": [5],
    }


@pytest.mark.parametrize("spec", ["value_step_size", "=0.1", "value_step_size="])
def test_parse_grid_rejects_malformed(spec):
    with pytest.raises(ConfigError):
        parse_grid([spec])


def test_apply_overrides(make_config):
    config = make_config(
        agents={
            "a": {"kind": "qlearning", "action_value_step_size": 0.1},
            "b": {"kind": "qlearning", "action_value_step_size": 0.2},
        }
    )

    everyone = apply_overrides(config, {"action_value_step_size": 0.5})
    assert {agent.action_value_step_size for agent in everyone.agents.values()} == {0.5}

    one = apply_overrides(config, {"agents.b.epsilon": 0.0, "env.counterexample_b_reward": -2.0})
    assert one.agents["a"].epsilon == 0.1
    assert one.agents["b"].epsilon == 0.0
    assert one.env.counterexample_b_reward == -2.0
    assert config.agents["b"].epsilon == 0.1


@pytest.mark.parametrize("key", ["no_such_field", "env.nope.deeper", "agents.missing.epsilon"])
def test_apply_overrides_rejects_unknown_keys(make_config, key):
    with pytest.raises(ConfigError):
        apply_overrides(make_config(), {key: 1})


def test_apply_overrides_revalidates(make_config):
    with pytest.raises(ConfigError):
        apply_overrides(make_config(), {"epsilon": 2.0})


def test_best_cells_prefers_first_key_on_ties():
    cells = [
        SweepCell("q", (("action_value_step_size", 0.3),), -1.0, 0.1),
        SweepCell("q", (("action_value_step_size", 0.1),), -1.0, 0.2),
        SweepCell("q", (("action_value_step_size", 0.2),), -2.0, 0.1),
    ]
    assert best_cells(cells)["q"] is cells[1]


def test_single_cell_sweep_matches_a_plain_run(make_config):
    config = make_config(episodes=40, runs=2, bin_size=10)
    config = config.model_copy(update={"sweep": SweepSection(episodes=40, runs=2)})

    cells = run_sweep(config, {"action_value_step_size": [0.3]})
    plain = run_experiment(config, write=False)["qlearning"]

    assert len(cells) == 1
    assert cells[0].final_mean == plain.final_bin_mean
    assert cells[0].final_se == plain.final_bin_se


def test_sweep_uses_its_own_protocol(make_config):
    config = make_config(episodes=400, runs=3, bin_size=10)
    config = config.model_copy(update={"sweep": SweepSection(episodes=20, runs=1)})
    cells = run_sweep(config, {"action_value_step_size": [0.1, 0.3]})
    assert [cell.key for cell in cells] == ["action_value_step_size=0.1", "action_value_step_size=0.3"]
    assert all(cell.final_se == 0.0 for cell in cells)


def test_write_sweep_csv(tmp_path):
    cells = [
        SweepCell("q", (("epsilon", 0.1),), -1.0, 0.1),
        SweepCell("q", (("epsilon", 0.2),), -0.5, 0.1),
    ]
    path = write_sweep_csv(tmp_path / "sweep.csv", cells)
    with open(path, newline="") as file:
        rows = list(csv.reader(file))
    assert rows[0] == ["agent", "epsilon", "final_mean", "final_se", "best"]
    assert [row[-1] for row in rows[1:]] == ["0", "1"]


def test_bare_keys_skip_agents_that_do_not_use_them():
    config = load_config("fig5b")
    swept = apply_overrides(config, {"value_step_size": 0.001, "planning_steps": 1})

    assert swept.agents["qlearning"].planning_steps == 0
    assert swept.agents["qlearning"].value_step_size is None
    for label in ("alg1", "alg2", "alg3"):
        assert swept.agents[label].planning_steps == 1
        assert swept.agents[label].value_step_size == 0.001


def test_bare_key_nobody_uses_is_rejected(make_config):
    with pytest.raises(ConfigError):
        apply_overrides(make_config(), {"planning_steps": 5})


@pytest.mark.parametrize(
    "kind, name, expected",
    [
        ("qlearning", "planning_steps", False),
        ("qlearning", "model_batch", False),
        ("qlearning", "epsilon", True),
        ("alg1", "policy_step_size", False),
        ("alg3", "policy_step_size", True),
        ("qplan-true", "planning_steps", True),
    ],
)
def test_agent_uses(kind, name, expected):
    assert agent_uses(kind, name) is expected
