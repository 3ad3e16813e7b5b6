"""Linear zero-terminal expectation model learned by stochastic gradient descent"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import numpy as np

from emcontrol.core.exceptions import DivergenceError, UsageError


class ExpectationModel(Protocol):
    """Anything that predicts (expected reward, zero-terminal expected next state)"""

    num_actions: int

    def predict(self, s: np.ndarray, a: int) -> tuple[float, np.ndarray]: ...

    def predict_all(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]: ...


@dataclass
class ModelLossStats:
    """Running means of the squared transition and reward errors"""
    transition_loss: float = 0.0
    reward_loss: float = 0.0
    count: int = 0

    def record(self, transition_error_sq: float, reward_error_sq: float) -> None:
        self.count += 1
        self.transition_loss += (transition_error_sq - self.transition_loss) / self.count
        self.reward_loss += (reward_error_sq - self.reward_loss) / self.count


class Ztem:
    """
    Per-action linear ZTEM: r(s, a) = b[a] . s and s_bar(s, a) = F[a] @ s.

    The terminal state is the zero vector, so termination probability is
    folded into the length of s_bar.
    """

    def __init__(self, F: np.ndarray, b: np.ndarray, step_size: float = 0.0):
        if F.ndim != 3 or F.shape[1] != F.shape[2]:
            raise UsageError(f"F must be A x d x d, got {F.shape}")
        if b.shape != F.shape[:2]:
            raise UsageError(f"b must be A x d, got {b.shape} for F {F.shape}")
        if step_size < 0:
            raise UsageError(f"Model step size must be non-negative, got {step_size}")
        self.F = np.array(F, dtype=float)
        self.b = np.array(b, dtype=float)
        self.step_size = float(step_size)
        self.stats = ModelLossStats()

    @classmethod
    def zeros(cls, num_actions: int, d: int, step_size: float) -> "Ztem":
        return cls(np.zeros((num_actions, d, d)), np.zeros((num_actions, d)), step_size)

    @property
    def num_actions(self) -> int:
        return self.F.shape[0]

    @property
    def d(self) -> int:
        return self.F.shape[1]

    def _check(self, s: np.ndarray, a: int | None = None) -> None:
        if s.shape != (self.d,):
            raise UsageError(f"Feature vector of shape {s.shape} does not match model dimension {self.d}")
        if a is not None and not 0 <= a < self.num_actions:
            raise UsageError(f"Action {a} out of range for {self.num_actions} actions")

    def predict(self, s: np.ndarray, a: int) -> tuple[float, np.ndarray]:
        self._check(s, a)
        return float(self.b[a] @ s), self.F[a] @ s

    def predict_all(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Rewards (A,) and zero-terminal next states (A, d) for every action"""
        self._check(s)
        return self.b @ s, self.F @ s

    def learn_step(self, s: np.ndarray, a: int, reward: float, s_next: np.ndarray) -> ModelLossStats:
        """
        One half-gradient step on 1/2 ||F[a] s - s'||^2 and 1/2 (b[a] . s - R)^2.

        `s_next` must be the zero vector when the transition terminated.
        """
        self._check(s, a)
        transition_error = s_next - self.F[a] @ s
        reward_error = reward - self.b[a] @ s
        self.stats.record(float(transition_error @ transition_error), float(reward_error**2))

        if self.step_size == 0.0:
            return self.stats

        self.F[a] += self.step_size * np.outer(transition_error, s)
        self.b[a] += self.step_size * reward_error * s
        if not (np.all(np.isfinite(self.F[a])) and np.all(np.isfinite(self.b[a]))):
            raise DivergenceError(
                f"Expectation model diverged on action {a} "
                f"(step size {self.step_size}, |transition error|={np.linalg.norm(transition_error):.3e})"
            )
        return self.stats

    def copy(self) -> "Ztem":
        return Ztem(self.F.copy(), self.b.copy(), self.step_size)

    def to_rows(self) -> list[tuple[int, int, int, float]]:
        """Flat dump: (action, row, col, value) for F and (action, row, -1, value) for b"""
        rows = []
        for a in range(self.num_actions):
            for i in range(self.d):
                for j in range(self.d):
                    rows.append((a, i, j, float(self.F[a, i, j])))
            for i in range(self.d):
                rows.append((a, i, -1, float(self.b[a, i])))
        return rows


def write_ztem_csv(model: Ztem, path: str | Path) -> Path:
    """Write a model snapshot for inspection"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(["action", "row", "col", "value"])
        for action, row, col, value in model.to_rows():
            writer.writerow([action, row, col, repr(value)])
    return path
