"""Agents that act greedily on per-action linear action values"""
from __future__ import annotations

from abc import abstractmethod

import numpy as np

from emcontrol.agents.base import Agent, ModelTrainer
from emcontrol.core.logging_config import get_logger
from emcontrol.envs.base import Environment
from emcontrol.envs.tabular import TabularDistributionModel
from emcontrol.features import FeatureMap
from emcontrol.models.ztem import Ztem
from emcontrol.planning.buffer import BackupBuffer, Transition
from emcontrol.planning.targets import aavi_target, aavi_target_distribution
from emcontrol.planning.weights import ActionValueWeights
from emcontrol.schemas import AgentConfig


logger = get_logger(__name__)


class QLearningAgent(Agent):
    """Model-free Q-learning with linear action values"""

    kind = "qlearning"

    def __init__(
        self,
        config: AgentConfig,
        num_actions: int,
        features: FeatureMap,
        buffer: BackupBuffer,
        rng: np.random.Generator,
    ):
        super().__init__(config, num_actions, features, buffer, rng)
        self.q = ActionValueWeights.zeros(num_actions, self.d, config.action_value_step_size)

    def select_action(self, s: np.ndarray) -> int:
        return self.explore.select(self.q.values(s), self.rng)

    def direct_update(self, transition: Transition) -> None:
        target = transition.reward
        if not transition.terminal:
            target += self.gamma * float(self.q.values(transition.s_next).max())
        self.q.update(transition.s, transition.action, target)


class QPlanningAgent(QLearningAgent):
    """Q-learning plus planning updates on stored (state, action) pairs"""

    @abstractmethod
    def planning_target(self, observation: int, s: np.ndarray, action: int) -> float:
        """Model-based target for q(s, action)"""

    def plan(self, n_steps: int) -> int:
        if len(self.buffer) == 0:
            return 0
        for _ in range(n_steps):
            observation, s, action = self.buffer.sample_state()
            self.q.update(s, action, self.planning_target(observation, s, action))
        return n_steps


class QPlanningTrueModelAgent(QPlanningAgent):
    """
    Plans with the environment's exact distribution model.

    The model is re-exported whenever the environment enters a new phase,
    so planning always uses the current goal.
    """

    kind = "qplan-true"

    def __init__(
        self,
        config: AgentConfig,
        num_actions: int,
        features: FeatureMap,
        buffer: BackupBuffer,
        rng: np.random.Generator,
    ):
        super().__init__(config, num_actions, features, buffer, rng)
        self.model: TabularDistributionModel | None = None
        self._model_phase = -1

    def begin_episode(self, env: Environment) -> None:
        super().begin_episode(env)
        if self.model is None or env.phase != self._model_phase:
            self.model = env.export_true_model()
            self._model_phase = env.phase
            logger.debug(f"True model refreshed for phase {env.phase}")

    def planning_target(self, observation: int, s: np.ndarray, action: int) -> float:
        return aavi_target_distribution(observation, action, self.model, self.q, self.features, self.gamma)


class QPlanningExpectationAgent(QPlanningAgent):
    """
    Plans with a learned linear expectation model and action values.

    Its target r + gamma max_a' q(s_bar, a') is only sound when the next
    state is deterministic; on stochastic tasks it learns the wrong values.
    """

    kind = "qplan-em-av"

    def __init__(
        self,
        config: AgentConfig,
        num_actions: int,
        features: FeatureMap,
        buffer: BackupBuffer,
        rng: np.random.Generator,
    ):
        super().__init__(config, num_actions, features, buffer, rng)
        self.model = Ztem.zeros(num_actions, self.d, config.model_step_size)
        self.trainer = ModelTrainer(self.model, buffer, config.model_batch)

    def train_model(self, transition: Transition) -> None:
        self.trainer.train(transition)

    def planning_target(self, observation: int, s: np.ndarray, action: int) -> float:
        return aavi_target(s, action, self.model, self.q, self.gamma)
