"""Central finite-difference checks of every hand-derived update direction"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from emcontrol.agents.policies import PolicyParams
from emcontrol.models.ztem import Ztem
from emcontrol.planning.updates import apply_value_update
from emcontrol.planning.weights import ValueWeights


@dataclass(frozen=True)
class GradientCheck:
    name: str
    points: int
    max_relative_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_relative_error < self.tolerance


def central_difference(f: Callable[[np.ndarray], float], x: np.ndarray, eps: float = 1e-6) -> np.ndarray:
    grad = np.zeros_like(x)
    for idx in np.ndindex(x.shape):
        original = x[idx]
        x[idx] = original + eps
        upper = f(x)
        x[idx] = original - eps
        lower = f(x)
        x[idx] = original
        grad[idx] = (upper - lower) / (2 * eps)
    return grad


def relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    scale = np.linalg.norm(analytic) + np.linalg.norm(numeric)
    if scale == 0.0:
        return 0.0
    return float(np.linalg.norm(analytic - numeric) / scale)


def check_softmax_log_gradient(points: int = 100, seed: int = 0, d: int = 5, num_actions: int = 3) -> GradientCheck:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        policy = PolicyParams(rng.normal(size=(num_actions, d)), step_size=0.0)
        s = rng.uniform(0.0, 1.0, size=d)
        a = int(rng.integers(num_actions))

        def log_prob(theta: np.ndarray) -> float:
            return PolicyParams(theta, 0.0).log_prob(s, a)

        numeric = central_difference(log_prob, policy.theta.copy())
        worst = max(worst, relative_error(policy.grad_log_prob(s, a), numeric))
    return GradientCheck("softmax_log_gradient", points, worst, 1e-6)


def _model_update_direction(model: Ztem, s: np.ndarray, a: int, reward: float, s_next: np.ndarray):
    before_F, before_b = model.F[a].copy(), model.b[a].copy()
    model.learn_step(s, a, reward, s_next)
    return (model.F[a] - before_F) / model.step_size, (model.b[a] - before_b) / model.step_size


def check_model_gradients(points: int = 100, seed: int = 0, d: int = 5, num_actions: int = 2) -> list[GradientCheck]:
    """learn_step must move F[a] and b[a] along the negative gradients of the two squared losses"""
    rng = np.random.default_rng(seed)
    worst_transition = 0.0
    worst_reward = 0.0
    for _ in range(points):
        model = Ztem(rng.normal(size=(num_actions, d, d)), rng.normal(size=(num_actions, d)), step_size=1e-3)
        s = rng.uniform(0.0, 1.0, size=d)
        s_next = rng.uniform(0.0, 1.0, size=d)
        reward = float(rng.uniform(-5.0, 5.0))
        a = int(rng.integers(num_actions))

        def transition_loss(F_a: np.ndarray) -> float:
            error = F_a @ s - s_next
            return 0.5 * float(error @ error)

        def reward_loss(b_a: np.ndarray) -> float:
            return 0.5 * float((b_a @ s - reward) ** 2)

        numeric_F = central_difference(transition_loss, model.F[a].copy())
        numeric_b = central_difference(reward_loss, model.b[a].copy())
        step_F, step_b = _model_update_direction(model, s, a, reward, s_next)
        worst_transition = max(worst_transition, relative_error(step_F, -numeric_F))
        worst_reward = max(worst_reward, relative_error(step_b, -numeric_b))

    return [
        GradientCheck("model_transition_gradient", points, worst_transition, 1e-6),
        GradientCheck("model_reward_gradient", points, worst_reward, 1e-6),
    ]


def check_value_update_gradient(points: int = 100, seed: int = 0, d: int = 5) -> GradientCheck:
    """apply_value_update must step along -grad of 1/2 (target - w . s)^2"""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(points):
        weights = ValueWeights(rng.normal(size=d), step_size=1e-3)
        s = rng.uniform(0.0, 1.0, size=d)
        target = float(rng.uniform(-5.0, 5.0))

        def loss(w: np.ndarray) -> float:
            return 0.5 * float((target - w @ s) ** 2)

        numeric = central_difference(loss, weights.w.copy(), eps=1e-5)
        before = weights.w.copy()
        apply_value_update(weights, s, target)
        worst = max(worst, relative_error((weights.w - before) / weights.step_size, -numeric))
    return GradientCheck("value_update_gradient", points, worst, 1e-8)
