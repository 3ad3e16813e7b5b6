"""Agent contract, the online model trainer and the episode loop"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from emcontrol.agents.policies import ExplorationPolicy
from emcontrol.core.logging_config import get_logger
from emcontrol.envs.base import Environment
from emcontrol.features import FeatureMap
from emcontrol.models.ztem import ExpectationModel, Ztem
from emcontrol.planning.buffer import BackupBuffer, Transition
from emcontrol.planning.targets import levi_backups
from emcontrol.planning.weights import ValueWeights
from emcontrol.schemas import AgentConfig


logger = get_logger(__name__)


@dataclass(frozen=True)
class EpisodeResult:
    total_reward: float
    steps: int
    truncated: bool
    planning_skipped: int = 0


def backup_values(
    s: np.ndarray,
    model: ExpectationModel,
    w: ValueWeights | np.ndarray,
    gamma: float = 1.0,
) -> np.ndarray:
    """One-step lookahead r(s, a) + gamma * v(s_bar(s, a)) for every action"""
    return levi_backups(s, model, w, gamma)


def backup_value(
    s: np.ndarray,
    a: int,
    model: ExpectationModel,
    w: ValueWeights | np.ndarray,
    gamma: float = 1.0,
) -> float:
    return float(backup_values(s, model, w, gamma)[a])


class ModelTrainer:
    """
    Online SGD for a learned Ztem.

    Each real transition gives one step on itself followed by `batch`
    steps on transitions replayed uniformly from the buffer.
    """

    def __init__(self, model: Ztem, buffer: BackupBuffer, batch: int):
        self.model = model
        self.buffer = buffer
        self.batch = batch

    def train(self, transition: Transition) -> None:
        self.model.learn_step(transition.s, transition.action, transition.reward, transition.s_next)
        if self.batch <= 0 or len(self.buffer) == 0:
            return
        replay = self.buffer.sample_transitions(self.batch)
        for s, a, reward, s_next in zip(replay.states, replay.actions, replay.rewards, replay.next_states):
            self.model.learn_step(s, int(a), float(reward), s_next)


class Agent(ABC):
    """
    Control agent driven by `run_episode`.

    Each real step the agent stores the transition, applies its direct
    update, trains its model (if it learns one) and plans, either every
    step or in one batch at the end of the episode depending on
    `planning_cadence`.
    """

    kind: str = ""

    def __init__(
        self,
        config: AgentConfig,
        num_actions: int,
        features: FeatureMap,
        buffer: BackupBuffer,
        rng: np.random.Generator,
    ):
        self.config = config
        self.num_actions = num_actions
        self.features = features
        self.d = features.d
        self.buffer = buffer
        self.rng = rng
        self.gamma = config.gamma
        self.explore = ExplorationPolicy(config.epsilon)
        self.planning_skipped = 0
        self._episode_steps = 0

    @abstractmethod
    def select_action(self, s: np.ndarray) -> int:
        """Decision-time action for feature vector `s`"""

    @abstractmethod
    def direct_update(self, transition: Transition) -> None:
        """Learn from the real transition"""

    def train_model(self, transition: Transition) -> None:
        """Agents with a learned model override this"""

    def plan(self, n_steps: int) -> int:
        """Run `n_steps` planning updates; returns how many were performed"""
        return 0

    def begin_episode(self, env: Environment) -> None:
        self.buffer.sync_phase(env.phase)
        self._episode_steps = 0

    def observe(self, transition: Transition) -> None:
        self.buffer.add(transition)
        self.direct_update(transition)
        self.train_model(transition)
        self._episode_steps += 1
        if self.config.planning_cadence == "step":
            self._plan(self.config.planning_steps)

    def end_episode(self) -> None:
        if self.config.planning_cadence == "episode":
            self._plan(self.config.planning_steps * self._episode_steps)

    def _plan(self, n_steps: int) -> None:
        if n_steps <= 0:
            return
        if self.plan(n_steps) == 0:
            self.planning_skipped += 1


def run_episode(agent: Agent, env: Environment, features: FeatureMap) -> EpisodeResult:
    """Play one episode to termination or truncation, learning online"""
    skipped_before = agent.planning_skipped
    observation = env.reset()
    agent.begin_episode(env)

    s = features.update(None, None, observation)
    total_reward = 0.0
    steps = 0

    while True:
        action = agent.select_action(s)
        step = env.step(action)
        s_next = features.update(s, action, step.observation)
        agent.observe(
            Transition(
                observation=observation,
                s=s,
                action=action,
                reward=step.reward,
                next_observation=step.observation,
                s_next=s_next,
                terminal=step.terminal,
            )
        )
        total_reward += step.reward
        steps += 1
        if step.done:
            break
        observation, s = step.observation, s_next

    agent.end_episode()
    if step.truncated:
        logger.debug(f"Episode truncated after {steps} steps (agent {agent.kind})")

    return EpisodeResult(
        total_reward=total_reward,
        steps=steps,
        truncated=step.truncated,
        planning_skipped=agent.planning_skipped - skipped_before,
    )
