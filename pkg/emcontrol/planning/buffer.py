from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from emcontrol.core.exceptions import UsageError
from emcontrol.core.logging_config import get_logger


logger = get_logger(__name__)


@dataclass(frozen=True)
class Transition:
    """One real experience tuple, with observation tokens and their features"""
    observation: int
    s: np.ndarray
    action: int
    reward: float
    next_observation: int
    s_next: np.ndarray
    terminal: bool


@dataclass(frozen=True)
class TransitionBatch:
    observations: np.ndarray
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    terminals: np.ndarray

    def __len__(self) -> int:
        return len(self.actions)


class BackupBuffer:
    """
    Fixed-capacity ring of visited transitions sampled uniformly.

    Serves both as the backup distribution for planning (states) and as the
    replay source for model training (full transitions). With
    `phase_reset` the contents are dropped whenever the environment's phase
    changes.
    """

    def __init__(self, capacity: int, d: int, rng: np.random.Generator, phase_reset: bool = False):
        if capacity < 1:
            raise UsageError(f"Buffer capacity must be positive, got {capacity}")
        self.capacity = capacity
        self.rng = rng
        self.phase_reset = phase_reset

        self.observations = np.zeros(capacity, dtype=np.int64)
        self.states = np.zeros((capacity, d))
        self.actions = np.zeros(capacity, dtype=np.int64)
        self.rewards = np.zeros(capacity)
        self.next_states = np.zeros((capacity, d))
        self.terminals = np.zeros(capacity, dtype=bool)

        self.ptr = 0
        self.size = 0
        self.phase = 0

    def __len__(self) -> int:
        return self.size

    def add(self, transition: Transition) -> None:
        i = self.ptr
        self.observations[i] = transition.observation
        self.states[i] = transition.s
        self.actions[i] = transition.action
        self.rewards[i] = transition.reward
        self.next_states[i] = transition.s_next
        self.terminals[i] = transition.terminal

        self.ptr = (self.ptr + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def clear(self) -> None:
        self.ptr = 0
        self.size = 0

    def sync_phase(self, phase: int) -> None:
        """Record the environment phase, clearing stale contents if configured"""
        if phase != self.phase:
            if self.phase_reset and self.size:
                logger.debug(f"Phase {self.phase} -> {phase}: dropping {self.size} stale transitions")
                self.clear()
            self.phase = phase

    def sample_indices(self, n: int) -> np.ndarray:
        if self.size == 0:
            raise UsageError("Cannot sample from an empty buffer")
        return self.rng.integers(0, self.size, size=n)

    def sample_state(self) -> tuple[int, np.ndarray, int]:
        """One uniformly drawn stored (observation, feature vector, action)"""
        i = int(self.sample_indices(1)[0])
        return int(self.observations[i]), self.states[i], int(self.actions[i])

    def sample_transitions(self, n: int) -> TransitionBatch:
        idxs = self.sample_indices(n)
        return TransitionBatch(
            observations=self.observations[idxs],
            states=self.states[idxs],
            actions=self.actions[idxs],
            rewards=self.rewards[idxs],
            next_states=self.next_states[idxs],
            terminals=self.terminals[idxs],
        )
