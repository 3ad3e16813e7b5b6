from __future__ import annotations

import numpy as np

from emcontrol.core.exceptions import UsageError


class Geem:
    """
    General episodic expectation model with linear heads.

    For feature vector s and action a: expected reward reward[a] . s, expected
    next state given no termination next_state[a] @ s, termination
    probability termination[a] . s clipped to [0, 1]. Over one-hot features
    each head is a table.
    """

    def __init__(self, reward: np.ndarray, next_state: np.ndarray, termination: np.ndarray):
        num_actions, d = reward.shape
        if next_state.shape != (num_actions, d, d) or termination.shape != (num_actions, d):
            raise UsageError("Geem heads must be A x d, A x d x d and A x d")
        if np.any(termination < 0) or np.any(termination > 1):
            raise UsageError("Termination probabilities must lie in [0, 1]")
        self.reward = np.array(reward, dtype=float)
        self.next_state = np.array(next_state, dtype=float)
        self.termination = np.array(termination, dtype=float)

    @property
    def num_actions(self) -> int:
        return self.reward.shape[0]

    @property
    def d(self) -> int:
        return self.reward.shape[1]

    def predict(self, s: np.ndarray, a: int) -> tuple[float, np.ndarray, float]:
        """(r_hat, s_hat, beta) for one action"""
        beta = float(np.clip(self.termination[a] @ s, 0.0, 1.0))
        return float(self.reward[a] @ s), self.next_state[a] @ s, beta

    def predict_all(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Rewards (A,), non-terminal next states (A, d) and betas (A,)"""
        return self.reward @ s, self.next_state @ s, np.clip(self.termination @ s, 0.0, 1.0)
