"""Episodic environment contract, per-run random streams and episode bookkeeping"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from emcontrol.core.exceptions import UsageError
from emcontrol.envs.tabular import TabularDistributionModel


TERMINAL = -1
"""Observation token emitted on termination (the terminal observation)."""

DEFAULT_STEP_CAP = 10_000


@dataclass(frozen=True)
class Step:
    """Outcome of one environment transition"""
    reward: float
    observation: int
    terminal: bool
    truncated: bool = False

    @property
    def done(self) -> bool:
        return self.terminal or self.truncated


@dataclass(frozen=True)
class RunStreams:
    """
    Independent random generators for one run, split from a single seed.

    Equal seeds give equal streams, so every source of randomness in a run
    can be replayed in isolation.
    """
    seed: int
    env: np.random.Generator
    explore: np.random.Generator
    features: np.random.Generator
    buffer: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "RunStreams":
        if seed < 0 or seed >= 2**64:
            raise UsageError(f"Seed must be a 64-bit unsigned integer, got {seed}")
        env, explore, features, buffer = np.random.SeedSequence(seed).spawn(4)
        return cls(
            seed=seed,
            env=np.random.default_rng(env),
            explore=np.random.default_rng(explore),
            features=np.random.default_rng(features),
            buffer=np.random.default_rng(buffer),
        )


class Environment(ABC):
    """
    Base class for the shipped episodic environments.

    Observations are discrete tokens 0..num_states-1 for non-terminal states
    and TERMINAL once the episode ends. Subclasses implement `_reset_state`
    and `_transition`; this class enforces the episode protocol.
    """

    num_states: int
    num_actions: int

    def __init__(self, rng: np.random.Generator, step_cap: int = DEFAULT_STEP_CAP):
        if step_cap < 1:
            raise UsageError(f"step_cap must be positive, got {step_cap}")
        self.rng = rng
        self.step_cap = step_cap
        self.steps = 0
        self.state: int | None = None
        self._episode_over = True

    @property
    @abstractmethod
    def reward_set(self) -> frozenset[float]:
        """Finite set of rewards this environment can emit"""

    @property
    def phase(self) -> int:
        """Number of goal switches so far (stationary environments stay at 0)"""
        return 0

    @abstractmethod
    def _reset_state(self) -> int:
        """Draw the start state of a new episode"""

    @abstractmethod
    def _transition(self, state: int, action: int) -> tuple[float, int]:
        """Sample (reward, next observation) for a non-terminal state"""

    @abstractmethod
    def export_true_model(self) -> TabularDistributionModel:
        """Exact dynamics of the current phase"""

    def reset(self) -> int:
        """Start a new episode and return the initial observation"""
        self.steps = 0
        self.state = self._reset_state()
        self._episode_over = False
        return self.state

    def step(self, action: int) -> Step:
        """Apply `action` and return the resulting Step"""
        if self._episode_over or self.state is None:
            raise UsageError("step() called on a finished episode; call reset() first")
        if not 0 <= action < self.num_actions:
            raise UsageError(f"Action {action} out of range for {self.num_actions} actions")

        reward, observation = self._transition(self.state, action)
        self.steps += 1

        if observation == TERMINAL:
            self._episode_over = True
            self.state = None
            return Step(reward=reward, observation=TERMINAL, terminal=True)

        self.state = observation
        if self.steps >= self.step_cap:
            self._episode_over = True
            return Step(reward=reward, observation=observation, terminal=False, truncated=True)
        return Step(reward=reward, observation=observation, terminal=False)
