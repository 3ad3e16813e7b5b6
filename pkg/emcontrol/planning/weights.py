from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from emcontrol.core.exceptions import DivergenceError, UsageError


def validate_gamma(gamma: float, episodic: bool = True) -> float:
    """Check a discount factor; gamma = 1 is only meaningful for episodic tasks"""
    if not 0.0 <= gamma <= 1.0:
        raise UsageError(f"gamma must lie in [0, 1], got {gamma}")
    if gamma == 1.0 and not episodic:
        raise UsageError("gamma = 1 requires an episodic environment")
    return float(gamma)


def ensure_finite(array: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(array)):
        raise DivergenceError(f"{what} became non-finite")


@dataclass
class ValueWeights:
    """Linear state-value head: v(s) = w . s"""
    w: np.ndarray
    step_size: float

    @classmethod
    def zeros(cls, d: int, step_size: float) -> "ValueWeights":
        return cls(np.zeros(d), step_size)

    def value(self, s: np.ndarray) -> float:
        return float(self.w @ s)


@dataclass
class ActionValueWeights:
    """Per-action linear action-value head: q(s, a) = wq[a] . s"""
    wq: np.ndarray
    step_size: float

    @classmethod
    def zeros(cls, num_actions: int, d: int, step_size: float) -> "ActionValueWeights":
        return cls(np.zeros((num_actions, d)), step_size)

    @property
    def num_actions(self) -> int:
        return self.wq.shape[0]

    def values(self, s: np.ndarray) -> np.ndarray:
        return self.wq @ s

    def value(self, s: np.ndarray, a: int) -> float:
        return float(self.wq[a] @ s)

    def update(self, s: np.ndarray, a: int, target: float) -> float:
        """Semi-gradient step of wq[a] toward `target`; returns the error"""
        error = target - float(self.wq[a] @ s)
        self.wq[a] += self.step_size * error * s
        ensure_finite(self.wq[a], f"Action-value weights for action {a}")
        return error
