"""State-update functions: fixed feature codes per observation"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from emcontrol.core.exceptions import UsageError
from emcontrol.core.logging_config import get_logger
from emcontrol.envs.base import TERMINAL


logger = get_logger(__name__)

FeatureKind = Literal["onehot", "random_binary"]


@dataclass(frozen=True)
class FeatureMap:
    """
    Lookup table from observation tokens to feature vectors.

    Row i of `table` is the code of observation i; the terminal observation
    always maps to the zero vector. The table is fixed for a whole run.
    """
    kind: FeatureKind
    table: np.ndarray
    k: int | None = None
    collisions: int = 0

    def __post_init__(self) -> None:
        self.table.setflags(write=False)

    @property
    def d(self) -> int:
        return self.table.shape[1]

    @property
    def num_observations(self) -> int:
        return self.table.shape[0]

    @property
    def is_one_hot(self) -> bool:
        return self.kind == "onehot"

    def encode(self, observation: int) -> np.ndarray:
        """Feature vector of `observation` (zero vector for the terminal token)"""
        if observation == TERMINAL:
            return np.zeros(self.d)
        if not 0 <= observation < self.num_observations:
            raise UsageError(f"Unknown observation token {observation}")
        return self.table[observation].copy()

    def update(self, previous: np.ndarray | None, action: int | None, observation: int) -> np.ndarray:
        """Recursive state-update form u(s, a, o); memoryless for the shipped maps"""
        return self.encode(observation)


def one_hot(num_observations: int) -> FeatureMap:
    """Identity code: d = num_observations, a single 1 at the observation's index"""
    if num_observations < 1:
        raise UsageError("Need at least one observation")
    return FeatureMap(kind="onehot", table=np.eye(num_observations))


def generate_random_binary_table(
    num_observations: int,
    d: int,
    k: int,
    seed: int | np.random.Generator,
) -> FeatureMap:
    """
    Give every observation k distinct active bits out of d, drawn without replacement.

    Identical codes for distinct observations are allowed; they are counted
    and logged.
    """
    if not 0 < k <= d:
        raise UsageError(f"Need 0 < k <= d, got k={k}, d={d}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    table = np.zeros((num_observations, d))
    for row in table:
        row[rng.choice(d, size=k, replace=False)] = 1.0

    distinct = len({row.tobytes() for row in table})
    collisions = num_observations - distinct
    if collisions:
        logger.warning(f"Random binary features: {collisions} observation(s) share a code (d={d}, k={k})")

    return FeatureMap(kind="random_binary", table=table, k=k, collisions=collisions)


def build_feature_map(
    kind: FeatureKind,
    num_observations: int,
    rng: np.random.Generator,
    d: int | None = None,
    k: int | None = None,
) -> FeatureMap:
    """Construct the configured feature map for an environment"""
    if kind == "onehot":
        return one_hot(num_observations)
    if d is None or k is None:
        raise UsageError("random_binary features need feature_d and feature_k")
    return generate_random_binary_table(num_observations, d, k, rng)
