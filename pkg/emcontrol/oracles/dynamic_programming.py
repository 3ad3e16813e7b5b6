"""
Exact tabular solvers used as ground truth.

Everything here works on `TabularDistributionModel` arrays directly and
never goes through feature maps or the planning targets.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from emcontrol.core.exceptions import OracleError, UsageError
from emcontrol.core.logging_config import get_logger
from emcontrol.envs.tabular import TabularDistributionModel


logger = get_logger(__name__)

MAX_SWEEPS = 10**6


@dataclass(frozen=True)
class TabularSolution:
    v_star: np.ndarray
    q_star: np.ndarray
    pi_star: np.ndarray
    residual: float
    sweeps: int


def _check_gamma(gamma: float) -> None:
    if not 0.0 <= gamma <= 1.0:
        raise UsageError(f"gamma must lie in [0, 1], got {gamma}")


def action_values(dm: TabularDistributionModel, v: np.ndarray, gamma: float) -> np.ndarray:
    """q(s, a) = r(s, a) + gamma * sum_{s'} p(s'|s, a) v(s'); termination contributes 0"""
    return dm.r + gamma * np.einsum("sat,t->sa", dm.p, v)


def solve_value_iteration(
    dm: TabularDistributionModel,
    gamma: float = 1.0,
    tol: float = 1e-12,
    max_sweeps: int = MAX_SWEEPS,
) -> TabularSolution:
    """
    Synchronous value iteration from v = 0 until the max change drops below `tol`.

    Raises OracleError when `max_sweeps` is exhausted, which at gamma = 1
    means termination is not reachable under the greedy policy.
    """
    if tol <= 0:
        raise UsageError(f"tol must be positive, got {tol}")
    _check_gamma(gamma)

    v = np.zeros(dm.num_states)
    for sweep in range(1, max_sweeps + 1):
        v_new = action_values(dm, v, gamma).max(axis=1)
        residual = float(np.abs(v_new - v).max()) if dm.num_states else 0.0
        v = v_new
        if not np.all(np.isfinite(v)):
            raise OracleError(f"Value iteration produced non-finite values after {sweep} sweeps")
        if residual < tol:
            break
    else:
        raise OracleError(
            f"Value iteration did not converge within {max_sweeps} sweeps (last change {residual:.3e})"
        )

    q = action_values(dm, v, gamma)
    logger.debug(f"Value iteration converged in {sweep} sweeps (residual {residual:.3e})")
    return TabularSolution(
        v_star=v,
        q_star=q,
        pi_star=np.argmax(q, axis=1),
        residual=residual,
        sweeps=sweep,
    )


def bellman_residual(dm: TabularDistributionModel, v: np.ndarray, gamma: float) -> float:
    """Naive single optimality sweep, written out state by state, as an independent re-check"""
    worst = 0.0
    for s in range(dm.num_states):
        best = -np.inf
        for a in range(dm.num_actions):
            backup = dm.r[s, a]
            for s_next in range(dm.num_states):
                backup += gamma * dm.p[s, a, s_next] * v[s_next]
            best = max(best, backup)
        worst = max(worst, abs(best - v[s]))
    return float(worst)


def epsilon_greedy_policy(greedy: np.ndarray, num_actions: int, epsilon: float) -> np.ndarray:
    """pi[s, a] = epsilon / |A| plus 1 - epsilon on the greedy action"""
    if not 0.0 <= epsilon <= 1.0:
        raise UsageError(f"epsilon must lie in [0, 1], got {epsilon}")
    pi = np.full((len(greedy), num_actions), epsilon / num_actions)
    pi[np.arange(len(greedy)), greedy] += 1.0 - epsilon
    return pi


def evaluate_policy(dm: TabularDistributionModel, pi: np.ndarray, gamma: float = 1.0) -> np.ndarray:
    """Solve v = r_pi + gamma P_pi v exactly"""
    _check_gamma(gamma)
    if pi.shape != (dm.num_states, dm.num_actions):
        raise UsageError(f"Policy must be n x A, got {pi.shape}")
    p_pi = np.einsum("sa,sat->st", pi, dm.p)
    r_pi = np.einsum("sa,sa->s", pi, dm.r)
    try:
        return np.linalg.solve(np.eye(dm.num_states) - gamma * p_pi, r_pi)
    except np.linalg.LinAlgError as e:
        raise OracleError("Policy evaluation system is singular; the policy may never terminate") from e


def evaluate_epsilon_greedy(
    dm: TabularDistributionModel,
    greedy: np.ndarray | TabularSolution,
    epsilon: float,
    gamma: float = 1.0,
) -> np.ndarray:
    """Per-state value of the epsilon-greedy smoothing of a deterministic policy"""
    actions = greedy.pi_star if isinstance(greedy, TabularSolution) else np.asarray(greedy, dtype=int)
    return evaluate_policy(dm, epsilon_greedy_policy(actions, dm.num_actions, epsilon), gamma)
