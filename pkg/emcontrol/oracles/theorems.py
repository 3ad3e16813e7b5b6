"""Brute-force checks that LEVI with aligned models reproduces AVI and EVI"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from emcontrol.core.exceptions import UsageError
from emcontrol.core.logging_config import get_logger
from emcontrol.envs.counterexample import ACTION_A, START, CounterexampleMdp
from emcontrol.envs.tabular import TabularDistributionModel
from emcontrol.features import one_hot
from emcontrol.models.alignment import align_ztem_from_distribution, align_ztem_from_geem
from emcontrol.models.geem import Geem
from emcontrol.oracles.dynamic_programming import solve_value_iteration
from emcontrol.planning.targets import levi_target


logger = get_logger(__name__)

MAX_ENUMERATED_STATES = 8


@dataclass(frozen=True)
class TheoremReport:
    trials: int
    num_states: int
    num_actions: int
    max_avi_deviation: float
    max_evi_deviation: float
    perturbation: float = 0.0

    @property
    def max_deviation(self) -> float:
        return max(self.max_avi_deviation, self.max_evi_deviation)


def _simplex_rows(rng: np.random.Generator, shape: tuple[int, ...], width: int) -> np.ndarray:
    positives = rng.uniform(1e-3, 1.0, size=(*shape, width))
    return positives / positives.sum(axis=-1, keepdims=True)


def random_distribution_model(n: int, num_actions: int, rng: np.random.Generator) -> TabularDistributionModel:
    """Transition rows from normalised uniform positives; the last column is termination mass"""
    rows = _simplex_rows(rng, (n, num_actions), n + 1)
    return TabularDistributionModel(
        p=rows[:, :, :n].copy(),
        term_prob=1.0 - rows[:, :, :n].sum(axis=2),
        r=rng.uniform(-5.0, 5.0, size=(n, num_actions)),
    )


def random_geem(n: int, num_actions: int, rng: np.random.Generator) -> Geem:
    """One-hot GEEM: each column of next_state[a] is a distribution over non-terminal states"""
    columns = _simplex_rows(rng, (num_actions, n), n)
    return Geem(
        reward=rng.uniform(-5.0, 5.0, size=(num_actions, n)),
        next_state=np.transpose(columns, (0, 2, 1)).copy(),
        termination=rng.uniform(0.0, 1.0, size=(num_actions, n)),
    )


def brute_force_avi(dm: TabularDistributionModel, w: np.ndarray, state: int, gamma: float) -> float:
    best = -np.inf
    for a in range(dm.num_actions):
        backup = dm.r[state, a]
        for s_next in range(dm.num_states):
            backup += gamma * dm.p[state, a, s_next] * w[s_next]
        best = max(best, backup)
    return float(best)


def brute_force_evi(geem: Geem, w: np.ndarray, state: int, gamma: float) -> float:
    best = -np.inf
    for a in range(geem.num_actions):
        expected_value = sum(geem.next_state[a, j, state] * w[j] for j in range(geem.d))
        backup = geem.reward[a, state] + gamma * (1.0 - geem.termination[a, state]) * expected_value
        best = max(best, backup)
    return float(best)


def enumerate_theorem_checks(
    n: int,
    num_actions: int,
    trials: int,
    seed: int,
    perturbation: float = 0.0,
) -> TheoremReport:
    """
    Random models and weights; max |LEVI - AVI| and |LEVI - EVI| over all states.

    A non-zero `perturbation` is added to one random entry of each aligned
    model first, turning the run into a negative control.
    """
    if not 1 <= n <= MAX_ENUMERATED_STATES:
        raise UsageError(f"n must lie in [1, {MAX_ENUMERATED_STATES}], got {n}")
    if num_actions < 1 or trials < 1:
        raise UsageError("num_actions and trials must be positive")

    rng = np.random.default_rng(seed)
    fmap = one_hot(n)
    max_avi = 0.0
    max_evi = 0.0

    for _ in range(trials):
        gamma = float(rng.uniform(0.5, 1.0))
        w = rng.uniform(-1.0, 1.0, size=n)

        dm = random_distribution_model(n, num_actions, rng)
        ztem = align_ztem_from_distribution(dm, fmap)
        geem = random_geem(n, num_actions, rng)
        # Geem copies its heads, so the brute-force side keeps the original
        aligned_source = Geem(geem.reward, geem.next_state, geem.termination)
        if perturbation:
            a, i, j = rng.integers(num_actions), rng.integers(n), rng.integers(n)
            ztem.F[a, i, j] += perturbation
            aligned_source.next_state[a, i, j] += perturbation
        aligned = align_ztem_from_geem(aligned_source)

        for state in range(n):
            s = fmap.encode(state)
            max_avi = max(max_avi, abs(levi_target(s, ztem, w, gamma) - brute_force_avi(dm, w, state, gamma)))
            max_evi = max(max_evi, abs(levi_target(s, aligned, w, gamma) - brute_force_evi(geem, w, state, gamma)))

    report = TheoremReport(
        trials=trials,
        num_states=n,
        num_actions=num_actions,
        max_avi_deviation=max_avi,
        max_evi_deviation=max_evi,
        perturbation=perturbation,
    )
    logger.debug(
        f"Theorem enumeration n={n} |A|={num_actions} trials={trials}: "
        f"AVI {max_avi:.3e}, EVI {max_evi:.3e}"
    )
    return report


def max_swap_witness(b_reward: float = -1.0) -> tuple[float, float]:
    """
    (sum_{s'} p(s') max_a q(s', a), max_a sum_{s'} p(s') q(s', a)) after action A
    from the counterexample's start state, with optimal leaf action values.

    With the two leaves equally likely these are 0 and -2.5.
    """
    dm = CounterexampleMdp(np.random.default_rng(0), b_reward=b_reward).export_true_model()
    q_star = solve_value_iteration(dm, gamma=1.0).q_star
    p_next = dm.p[START, ACTION_A]
    lhs = float(p_next @ q_star.max(axis=1))
    rhs = float((p_next @ q_star).max())
    return lhs, rhs
