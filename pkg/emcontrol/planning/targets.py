"""Update targets of the approximate value iteration family"""
from __future__ import annotations

import numpy as np

from emcontrol.envs.tabular import TabularDistributionModel
from emcontrol.features import FeatureMap
from emcontrol.models.geem import Geem
from emcontrol.models.ztem import ExpectationModel
from emcontrol.planning.weights import ActionValueWeights, ValueWeights


def _weights(w: ValueWeights | np.ndarray) -> np.ndarray:
    return w.w if isinstance(w, ValueWeights) else w


def _action_weights(wq: ActionValueWeights | np.ndarray) -> np.ndarray:
    return wq.wq if isinstance(wq, ActionValueWeights) else wq


def levi_backups(s: np.ndarray, model: ExpectationModel, w: ValueWeights | np.ndarray, gamma: float) -> np.ndarray:
    """r(s, a) + gamma * w . s_bar(s, a) for every action"""
    rewards, next_states = model.predict_all(s)
    return rewards + gamma * (next_states @ _weights(w))


def levi_backup(
    s: np.ndarray,
    model: ExpectationModel,
    w: ValueWeights | np.ndarray,
    gamma: float,
) -> tuple[float, int]:
    """LEVI target and the action attaining it (lowest index on ties)"""
    backups = levi_backups(s, model, w, gamma)
    action = int(np.argmax(backups))
    return float(backups[action]), action


def levi_target(s: np.ndarray, model: ExpectationModel, w: ValueWeights | np.ndarray, gamma: float) -> float:
    return levi_backup(s, model, w, gamma)[0]


def evi_target(s: np.ndarray, geem: Geem, w: ValueWeights | np.ndarray, gamma: float) -> float:
    """max_a [ r(s, a) + gamma * (1 - beta(s, a)) * v(s_hat(s, a)) ]"""
    rewards, s_hats, betas = geem.predict_all(s)
    backups = rewards + gamma * (1.0 - betas) * (s_hats @ _weights(w))
    return float(backups.max())


def avi_target(
    state: int,
    dm: TabularDistributionModel,
    w: ValueWeights | np.ndarray,
    feature_map: FeatureMap,
    gamma: float,
) -> float:
    """max_a [ r(s, a) + gamma * sum_{s'} p(s'|s, a) v(phi(s')) ]; termination contributes 0"""
    next_values = feature_map.table @ _weights(w)
    backups = dm.r[state] + gamma * (dm.p[state] @ next_values)
    return float(backups.max())


def aavi_target(
    s: np.ndarray,
    a: int,
    model: ExpectationModel,
    wq: ActionValueWeights | np.ndarray,
    gamma: float,
) -> float:
    """Expectation-model action-value target r(s, a) + gamma * max_a' wq[a'] . s_bar(s, a)"""
    reward, s_bar = model.predict(s, a)
    return reward + gamma * float((_action_weights(wq) @ s_bar).max())


def aavi_target_distribution(
    state: int,
    a: int,
    dm: TabularDistributionModel,
    wq: ActionValueWeights | np.ndarray,
    feature_map: FeatureMap,
    gamma: float,
) -> float:
    """Distribution-model action-value target r(s, a) + gamma * sum_{s'} p(s'|s, a) max_a' q(s', a')"""
    next_q = feature_map.table @ _action_weights(wq).T
    return float(dm.r[state, a] + gamma * (dm.p[state, a] @ next_q.max(axis=1)))
