"""Three-state episodic MDP on which action-value planning with expectation models fails"""
from __future__ import annotations

import numpy as np

from emcontrol.envs.base import DEFAULT_STEP_CAP, TERMINAL, Environment
from emcontrol.envs.tabular import TabularDistributionModel


ACTION_A = 0
ACTION_B = 1

# Tokens 0, 1, 2 stand for the start state and the two leaf states.
START = 0
LEAF_A_GOOD = 1
LEAF_B_GOOD = 2

LEAF_PENALTY = -5.0


class CounterexampleMdp(Environment):
    """
    From the start state, action A branches to either leaf with probability
    `branch_prob` / 1 - `branch_prob` and reward 0; action B terminates with
    reward `b_reward`. In the first leaf A pays 0 and B pays -5, in the second
    leaf the payoffs are swapped. Both leaves terminate on any action.
    """

    num_states = 3
    num_actions = 2

    def __init__(
        self,
        rng: np.random.Generator,
        b_reward: float = -1.0,
        branch_prob: float = 0.5,
        step_cap: int = DEFAULT_STEP_CAP,
    ):
        super().__init__(rng, step_cap)
        self.b_reward = float(b_reward)
        self.branch_prob = float(branch_prob)

    @property
    def reward_set(self) -> frozenset[float]:
        return frozenset({0.0, LEAF_PENALTY, self.b_reward})

    def _reset_state(self) -> int:
        return START

    def _transition(self, state: int, action: int) -> tuple[float, int]:
        if state == START:
            if action == ACTION_B:
                return self.b_reward, TERMINAL
            leaf = LEAF_A_GOOD if self.rng.random() < self.branch_prob else LEAF_B_GOOD
            return 0.0, leaf

        good_action = ACTION_A if state == LEAF_A_GOOD else ACTION_B
        return (0.0 if action == good_action else LEAF_PENALTY), TERMINAL

    def export_true_model(self) -> TabularDistributionModel:
        p = np.zeros((3, 2, 3))
        term_prob = np.zeros((3, 2))
        r = np.zeros((3, 2))

        p[START, ACTION_A, LEAF_A_GOOD] = self.branch_prob
        p[START, ACTION_A, LEAF_B_GOOD] = 1.0 - self.branch_prob
        term_prob[START, ACTION_B] = 1.0
        r[START, ACTION_B] = self.b_reward

        term_prob[LEAF_A_GOOD, :] = 1.0
        term_prob[LEAF_B_GOOD, :] = 1.0
        r[LEAF_A_GOOD, ACTION_B] = LEAF_PENALTY
        r[LEAF_B_GOOD, ACTION_A] = LEAF_PENALTY

        return TabularDistributionModel(p=p, term_prob=term_prob, r=r)
