"""Conversions between distribution models, GEEMs and ZTEMs that preserve planning targets"""
from __future__ import annotations

import numpy as np

from emcontrol.core.exceptions import UnsupportedModelError
from emcontrol.envs.tabular import TabularDistributionModel
from emcontrol.features import FeatureMap
from emcontrol.models.geem import Geem
from emcontrol.models.ztem import Ztem


def _require_one_hot(feature_map: FeatureMap, dm: TabularDistributionModel) -> None:
    if not feature_map.is_one_hot:
        raise UnsupportedModelError(
            f"Alignment is only exact for one-hot features, got {feature_map.kind}"
        )
    if feature_map.num_observations != dm.num_states:
        raise UnsupportedModelError(
            f"Feature map covers {feature_map.num_observations} observations, model has {dm.num_states} states"
        )


def align_ztem_from_distribution(
    dm: TabularDistributionModel,
    feature_map: FeatureMap,
    step_size: float = 0.0,
) -> Ztem:
    """
    ZTEM whose s_bar(s, a) is the expectation of the next feature vector,
    with termination contributing the zero vector.
    """
    _require_one_hot(feature_map, dm)
    # column s of F[a] is sum_{s'} p(s'|s,a) phi(s')
    F = np.einsum("sat,tj->ajs", dm.p, feature_map.table)
    b = dm.r.T.copy()
    return Ztem(F, b, step_size)


class GeemAlignedZtem:
    """ZTEM-style predictor built from a GEEM: s_bar = (1 - beta) * s_hat"""

    def __init__(self, geem: Geem):
        self.geem = geem

    @property
    def num_actions(self) -> int:
        return self.geem.num_actions

    def predict(self, s: np.ndarray, a: int) -> tuple[float, np.ndarray]:
        reward, s_hat, beta = self.geem.predict(s, a)
        return reward, (1.0 - beta) * s_hat

    def predict_all(self, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        rewards, s_hats, betas = self.geem.predict_all(s)
        return rewards, (1.0 - betas)[:, None] * s_hats


def align_ztem_from_geem(geem: Geem) -> GeemAlignedZtem:
    return GeemAlignedZtem(geem)


def geem_from_distribution(dm: TabularDistributionModel, feature_map: FeatureMap) -> Geem:
    """GEEM with beta = termination mass and s_hat = expected next state given no termination"""
    _require_one_hot(feature_map, dm)
    beta = dm.term_prob
    survive = 1.0 - beta
    expected_next = np.einsum("sat,tj->saj", dm.p, feature_map.table)
    s_hat = np.divide(
        expected_next,
        survive[:, :, None],
        out=np.zeros_like(expected_next),
        where=survive[:, :, None] > 0,
    )
    return Geem(
        reward=dm.r.T.copy(),
        next_state=np.transpose(s_hat, (1, 2, 0)).copy(),
        termination=beta.T.copy(),
    )
