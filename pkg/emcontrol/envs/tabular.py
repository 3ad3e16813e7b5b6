from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from emcontrol.core.exceptions import UsageError


@dataclass(frozen=True)
class TabularDistributionModel:
    """
    Exact one-step dynamics over an enumerable set of non-terminal states.

    `p[s, a, s']` is the probability of landing in non-terminal `s'`,
    `term_prob[s, a]` the remaining mass (termination) and `r[s, a]` the
    expected reward.
    """
    p: np.ndarray
    term_prob: np.ndarray
    r: np.ndarray

    def __post_init__(self) -> None:
        n, num_actions, n_next = self.p.shape
        if n != n_next:
            raise UsageError(f"Transition tensor must be n x A x n, got {self.p.shape}")
        if self.term_prob.shape != (n, num_actions) or self.r.shape != (n, num_actions):
            raise UsageError("term_prob and r must be n x A")
        if np.any(self.p < 0) or np.any(self.term_prob < 0) or np.any(self.term_prob > 1):
            raise UsageError("Probabilities must lie in [0, 1]")
        totals = self.p.sum(axis=2) + self.term_prob
        if not np.allclose(totals, 1.0, atol=1e-12):
            raise UsageError(f"Rows must sum to 1 (max error {np.abs(totals - 1).max():.3e})")

    @property
    def num_states(self) -> int:
        return self.p.shape[0]

    @property
    def num_actions(self) -> int:
        return self.p.shape[1]

    def diff(self, other: "TabularDistributionModel") -> list[tuple[int, int]]:
        """(state, action) pairs whose transition, termination or reward entries differ"""
        changed = (
            np.any(self.p != other.p, axis=2)
            | (self.term_prob != other.term_prob)
            | (self.r != other.r)
        )
        return [(int(s), int(a)) for s, a in zip(*np.nonzero(changed))]
