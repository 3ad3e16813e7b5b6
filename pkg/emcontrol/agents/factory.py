from __future__ import annotations

import numpy as np

from emcontrol.agents.action_value import QLearningAgent, QPlanningExpectationAgent, QPlanningTrueModelAgent
from emcontrol.agents.base import Agent
from emcontrol.agents.state_value import CachedActionValueAgent, CachedPolicyAgent, LookaheadAgent
from emcontrol.core.exceptions import UsageError
from emcontrol.envs.base import Environment
from emcontrol.features import FeatureMap
from emcontrol.planning.buffer import BackupBuffer
from emcontrol.planning.weights import validate_gamma
from emcontrol.schemas import AgentConfig


AGENT_CLASSES: dict[str, type[Agent]] = {
    cls.kind: cls
    for cls in (
        QLearningAgent,
        QPlanningTrueModelAgent,
        QPlanningExpectationAgent,
        LookaheadAgent,
        CachedActionValueAgent,
        CachedPolicyAgent,
    )
}


def build_agent(
    config: AgentConfig,
    env: Environment,
    features: FeatureMap,
    explore_rng: np.random.Generator,
    buffer_rng: np.random.Generator,
) -> Agent:
    """Instantiate the configured agent with its own backup buffer"""
    try:
        agent_cls = AGENT_CLASSES[config.kind]
    except KeyError:
        raise UsageError(f"Unknown agent kind {config.kind!r}") from None

    validate_gamma(config.gamma, episodic=True)
    buffer = BackupBuffer(config.buffer_capacity, features.d, buffer_rng, phase_reset=config.buffer_phase_reset)
    return agent_cls(config, env.num_actions, features, buffer, explore_rng)
