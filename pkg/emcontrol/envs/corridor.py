"""One-dimensional corridor with slippery moves and a goal that can switch ends"""
from __future__ import annotations

from typing import Literal

import numpy as np

from emcontrol.core.exceptions import UsageError
from emcontrol.core.logging_config import get_logger
from emcontrol.envs.base import DEFAULT_STEP_CAP, TERMINAL, Environment
from emcontrol.envs.tabular import TabularDistributionModel


logger = get_logger(__name__)

LEFT = 0
RIGHT = 1

GoalSide = Literal["left", "right"]


class CorridorEnv(Environment):
    """
    `length` white cells between two terminal cells.

    A move goes the way it is named with probability 1 - `slip_prob` and the
    opposite way otherwise. Every step costs `step_reward`; stepping into the
    goal terminal also pays `goal_reward`, stepping into the other terminal
    pays `other_terminal_reward`. With `phase_length` > 0 the goal changes
    ends every `phase_length` episodes, checked at reset.
    """

    num_actions = 2

    def __init__(
        self,
        rng: np.random.Generator,
        length: int = 9,
        slip_prob: float = 1 / 3,
        goal_side: GoalSide = "right",
        phase_length: int = 0,
        step_reward: float = -1.0,
        goal_reward: float = 20.0,
        other_terminal_reward: float = 0.0,
        step_cap: int = DEFAULT_STEP_CAP,
    ):
        super().__init__(rng, step_cap)
        if length < 1:
            raise UsageError(f"Corridor needs at least one cell, got {length}")
        if not 0.0 <= slip_prob <= 1.0:
            raise UsageError(f"slip_prob must lie in [0, 1], got {slip_prob}")
        if goal_side not in ("left", "right"):
            raise UsageError(f"goal_side must be 'left' or 'right', got {goal_side!r}")
        if phase_length < 0:
            raise UsageError(f"phase_length must be >= 0, got {phase_length}")

        self.num_states = length
        self.slip_prob = float(slip_prob)
        self.goal_side: GoalSide = goal_side
        self.phase_length = phase_length
        self.step_reward = float(step_reward)
        self.goal_reward = float(goal_reward)
        self.other_terminal_reward = float(other_terminal_reward)
        self.episodes_in_phase = 0
        self._phase = 0

    @property
    def reward_set(self) -> frozenset[float]:
        return frozenset({
            self.step_reward,
            self.step_reward + self.goal_reward,
            self.step_reward + self.other_terminal_reward,
        })

    @property
    def phase(self) -> int:
        return self._phase

    def switch_goal(self) -> None:
        """Move the goal to the other end and restart the phase episode count"""
        self.goal_side = "left" if self.goal_side == "right" else "right"
        self.episodes_in_phase = 0
        self._phase += 1
        logger.debug(f"Corridor goal switched to {self.goal_side} (phase {self._phase})")

    def reset(self) -> int:
        if self.phase_length > 0 and self.episodes_in_phase >= self.phase_length:
            self.switch_goal()
        self.episodes_in_phase += 1
        return super().reset()

    def _reset_state(self) -> int:
        return int(self.rng.integers(self.num_states))

    def _terminal_bonus(self, side: GoalSide) -> float:
        return self.goal_reward if side == self.goal_side else self.other_terminal_reward

    def _outcome(self, state: int, direction: int) -> tuple[float, int]:
        """Deterministic (reward, next observation) of moving one cell in `direction`"""
        target = state - 1 if direction == LEFT else state + 1
        if target < 0:
            return self.step_reward + self._terminal_bonus("left"), TERMINAL
        if target >= self.num_states:
            return self.step_reward + self._terminal_bonus("right"), TERMINAL
        return self.step_reward, target

    def _transition(self, state: int, action: int) -> tuple[float, int]:
        slipped = self.slip_prob > 0.0 and self.rng.random() < self.slip_prob
        direction = (1 - action) if slipped else action
        return self._outcome(state, direction)

    def export_true_model(self) -> TabularDistributionModel:
        n = self.num_states
        p = np.zeros((n, 2, n))
        term_prob = np.zeros((n, 2))
        r = np.zeros((n, 2))

        for state in range(n):
            for action in (LEFT, RIGHT):
                outcomes = ((action, 1.0 - self.slip_prob), (1 - action, self.slip_prob))
                for direction, prob in outcomes:
                    if prob == 0.0:
                        continue
                    reward, observation = self._outcome(state, direction)
                    r[state, action] += prob * reward
                    if observation == TERMINAL:
                        term_prob[state, action] += prob
                    else:
                        p[state, action, observation] += prob

        return TabularDistributionModel(p=p, term_prob=term_prob, r=r)
