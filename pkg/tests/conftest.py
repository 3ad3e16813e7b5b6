import numpy as np
import pytest

from emcontrol.envs import CorridorEnv, CounterexampleMdp
from emcontrol.features import one_hot
from emcontrol.harness.config_loader import parse_config


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def counterexample_model():
    return CounterexampleMdp(np.random.default_rng(0)).export_true_model()


@pytest.fixture
def deterministic_corridor_model():
    return CorridorEnv(np.random.default_rng(0), slip_prob=0.0).export_true_model()


@pytest.fixture
def stochastic_corridor_model():
    return CorridorEnv(np.random.default_rng(0), slip_prob=1 / 3).export_true_model()


@pytest.fixture
def onehot3():
    return one_hot(3)


@pytest.fixture
def make_config():
    """Build a validated ExperimentConfig from a small dict, TOML-style"""

    def factory(agents=None, env=None, features=None, agent_defaults=None, **experiment):
        raw = {
            "experiment": {"name": "test", "episodes": 20, "runs": 2, "bin_size": 5, **experiment},
            "env": env or {"env": "counterexample"},
            "features": features or {"features": "onehot"},
            "agents": agents or {"qlearning": {"kind": "qlearning", "action_value_step_size": 0.3}},
        }
        if agent_defaults:
            raw["agent_defaults"] = agent_defaults
        return parse_config(raw)

    return factory
