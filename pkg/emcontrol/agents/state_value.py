"""
Agents that learn state values and plan with a learned expectation model.

All three share the same value learning: TD(0) on real transitions and LEVI
planning over the backup buffer. They differ in how they pick actions at
decision time:

- `LookaheadAgent` takes a one-step lookahead through the model
- `CachedActionValueAgent` caches planning backups in action values
- `CachedPolicyAgent` caches them in a softmax policy
"""
from __future__ import annotations

import numpy as np

from emcontrol.agents.base import Agent, ModelTrainer, backup_value, backup_values
from emcontrol.agents.policies import ExplorationPolicy, PolicyParams
from emcontrol.features import FeatureMap
from emcontrol.models.ztem import ExpectationModel, Ztem
from emcontrol.planning.buffer import BackupBuffer, Transition
from emcontrol.planning.updates import plan_round, td_direct_update
from emcontrol.planning.weights import ActionValueWeights, ValueWeights
from emcontrol.schemas import AgentConfig


def select_action_alg1(
    s: np.ndarray,
    model: ExpectationModel,
    w: ValueWeights | np.ndarray,
    explore: ExplorationPolicy,
    rng: np.random.Generator,
    gamma: float = 1.0,
) -> int:
    """Epsilon-greedy over the model's one-step backup values"""
    return explore.select(backup_values(s, model, w, gamma), rng)


def alg2_cache_update(wq: ActionValueWeights, s: np.ndarray, a: int, backup: float) -> float:
    """Move q(s, a) toward a backup value computed during planning"""
    return wq.update(s, a, backup)


def alg3_policy_update(
    theta: PolicyParams,
    s: np.ndarray,
    a: int,
    model: ExpectationModel,
    w: ValueWeights | np.ndarray,
    gamma: float = 1.0,
) -> float:
    """Policy-gradient step with delta = r(s, a) + gamma v(s_bar) - v(s); returns delta"""
    values = w.w if isinstance(w, ValueWeights) else w
    delta = backup_value(s, a, model, values, gamma) - float(values @ s)
    theta.update(s, a, delta)
    return delta


class StateValueAgent(Agent):
    """Shared TD(0) value learning, model learning and LEVI planning"""

    def __init__(
        self,
        config: AgentConfig,
        num_actions: int,
        features: FeatureMap,
        buffer: BackupBuffer,
        rng: np.random.Generator,
    ):
        super().__init__(config, num_actions, features, buffer, rng)
        self.w = ValueWeights.zeros(self.d, config.value_step_size)
        self.model = Ztem.zeros(num_actions, self.d, config.model_step_size)
        self.trainer = ModelTrainer(self.model, buffer, config.model_batch)

    def direct_update(self, transition: Transition) -> None:
        delta = td_direct_update(self.w, transition.s, transition.reward, transition.s_next, self.gamma)
        self.after_direct_update(transition, delta)

    def after_direct_update(self, transition: Transition, delta: float) -> None:
        pass

    def train_model(self, transition: Transition) -> None:
        self.trainer.train(transition)

    def on_backup(self, s: np.ndarray, action: int, target: float) -> None:
        pass

    def plan(self, n_steps: int) -> int:
        return plan_round(self.w, self.model, self.buffer, n_steps, self.gamma, on_backup=self.on_backup)


class LookaheadAgent(StateValueAgent):
    """Chooses actions by looking one step ahead through the model"""

    kind = "alg1"

    def select_action(self, s: np.ndarray) -> int:
        return select_action_alg1(s, self.model, self.w, self.explore, self.rng, self.gamma)


class CachedActionValueAgent(StateValueAgent):
    """
    Keeps action values filled in by planning, so acting needs no model call.

    The direct update moves q(s, a) toward R + gamma v(s'). With
    `alg2_literal_pseudocode` it instead moves toward the TD error itself.
    Each planning
    backup refreshes q for the greedy action, or every action with
    `cache_all_actions`, using the value weights after that planning update.
    """

    kind = "alg2"

    def __init__(
        self,
        config: AgentConfig,
        num_actions: int,
        features: FeatureMap,
        buffer: BackupBuffer,
        rng: np.random.Generator,
    ):
        super().__init__(config, num_actions, features, buffer, rng)
        self.q = ActionValueWeights.zeros(num_actions, self.d, config.action_value_step_size)

    def select_action(self, s: np.ndarray) -> int:
        return self.explore.select(self.q.values(s), self.rng)

    def after_direct_update(self, transition: Transition, delta: float) -> None:
        if self.config.alg2_literal_pseudocode:
            target = delta
        else:
            target = transition.reward + self.gamma * self.w.value(transition.s_next)
        self.q.update(transition.s, transition.action, target)

    def on_backup(self, s: np.ndarray, action: int, target: float) -> None:
        actions = range(self.num_actions) if self.config.cache_all_actions else (action,)
        for a in actions:
            alg2_cache_update(self.q, s, a, backup_value(s, a, self.model, self.w, self.gamma))


class CachedPolicyAgent(StateValueAgent):
    """
    Keeps a softmax policy trained by actor-critic steps.

    Real transitions use the TD error of the direct update; planning steps
    sample an action from the policy and use the model's backup instead.
    """

    kind = "alg3"

    def __init__(
        self,
        config: AgentConfig,
        num_actions: int,
        features: FeatureMap,
        buffer: BackupBuffer,
        rng: np.random.Generator,
    ):
        super().__init__(config, num_actions, features, buffer, rng)
        self.theta = PolicyParams.zeros(num_actions, self.d, config.policy_step_size)

    def select_action(self, s: np.ndarray) -> int:
        return self.theta.sample(s, self.rng)

    def after_direct_update(self, transition: Transition, delta: float) -> None:
        self.theta.update(transition.s, transition.action, delta)

    def on_backup(self, s: np.ndarray, action: int, target: float) -> None:
        a = self.theta.sample(s, self.rng)
        alg3_policy_update(self.theta, s, a, self.model, self.w, self.gamma)
