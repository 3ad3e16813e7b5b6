"""Decision-time action selection: epsilon-greedy and a linear softmax policy"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from emcontrol.core.exceptions import UsageError
from emcontrol.planning.weights import ensure_finite


@dataclass(frozen=True)
class ExplorationPolicy:
    """
    Epsilon-greedy over a vector of action scores.

    The greedy action (lowest index among ties) is taken with probability
    1 - epsilon + epsilon / |A|.
    """
    epsilon: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.epsilon <= 1.0:
            raise UsageError(f"epsilon must lie in [0, 1], got {self.epsilon}")

    def select(self, scores: np.ndarray, rng: np.random.Generator) -> int:
        if self.epsilon > 0.0 and rng.random() < self.epsilon:
            return int(rng.integers(len(scores)))
        return int(np.argmax(scores))

    def probabilities(self, scores: np.ndarray) -> np.ndarray:
        probs = np.full(len(scores), self.epsilon / len(scores))
        probs[int(np.argmax(scores))] += 1.0 - self.epsilon
        return probs


@dataclass
class PolicyParams:
    """Softmax policy over linear preferences theta[a] . s"""
    theta: np.ndarray
    step_size: float

    @classmethod
    def zeros(cls, num_actions: int, d: int, step_size: float) -> "PolicyParams":
        return cls(np.zeros((num_actions, d)), step_size)

    @property
    def num_actions(self) -> int:
        return self.theta.shape[0]

    def probabilities(self, s: np.ndarray) -> np.ndarray:
        preferences = self.theta @ s
        shifted = np.exp(preferences - preferences.max())
        return shifted / shifted.sum()

    def log_prob(self, s: np.ndarray, a: int) -> float:
        preferences = self.theta @ s
        top = preferences.max()
        return float(preferences[a] - top - np.log(np.exp(preferences - top).sum()))

    def sample(self, s: np.ndarray, rng: np.random.Generator) -> int:
        cumulative = np.cumsum(self.probabilities(s))
        return min(int(np.searchsorted(cumulative, rng.random(), side="right")), self.num_actions - 1)

    def grad_log_prob(self, s: np.ndarray, a: int) -> np.ndarray:
        """d log pi(a|s) / d theta: s (1 - pi(a|s)) on row a, -s pi(a'|s) on the others"""
        grad = -np.outer(self.probabilities(s), s)
        grad[a] += s
        return grad

    def update(self, s: np.ndarray, a: int, delta: float) -> None:
        self.theta += self.step_size * delta * self.grad_log_prob(s, a)
        ensure_finite(self.theta, "Policy parameters")
