from __future__ import annotations

from typing import Callable

import numpy as np

from emcontrol.core.logging_config import get_logger
from emcontrol.models.ztem import ExpectationModel
from emcontrol.planning.buffer import BackupBuffer
from emcontrol.planning.targets import levi_backup
from emcontrol.planning.weights import ValueWeights, ensure_finite


logger = get_logger(__name__)

BackupHook = Callable[[np.ndarray, int, float], None]


def apply_value_update(w: ValueWeights, s: np.ndarray, target: float) -> float:
    """Semi-gradient step w += alpha (target - w . s) s; returns the error"""
    error = target - float(w.w @ s)
    w.w += w.step_size * error * s
    ensure_finite(w.w, "State-value weights")
    return error


def td_direct_update(
    w: ValueWeights,
    s: np.ndarray,
    reward: float,
    s_next: np.ndarray,
    gamma: float,
) -> float:
    """TD(0) on a real transition; `s_next` is the zero vector after termination"""
    delta = reward + gamma * float(w.w @ s_next) - float(w.w @ s)
    w.w += w.step_size * delta * s
    ensure_finite(w.w, "State-value weights")
    return delta


def plan_round(
    w: ValueWeights,
    model: ExpectationModel,
    buffer: BackupBuffer,
    n_steps: int,
    gamma: float,
    on_backup: BackupHook | None = None,
) -> int:
    """
    `n_steps` LEVI updates from states drawn uniformly out of `buffer`.

    `on_backup(s, greedy_action, target)` runs after each value update so
    agents can cache what planning computed. Returns the number of updates
    performed (0 when the buffer is empty).
    """
    if n_steps <= 0:
        return 0
    if len(buffer) == 0:
        logger.debug("Planning skipped: backup buffer is empty")
        return 0

    for _ in range(n_steps):
        _, s, _ = buffer.sample_state()
        target, action = levi_backup(s, model, w, gamma)
        apply_value_update(w, s, target)
        if on_backup is not None:
            on_backup(s, action, target)
    return n_steps
