"""Pydantic models for experiment configuration"""
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


AgentKind = Literal["qlearning", "qplan-true", "qplan-em-av", "alg1", "alg2", "alg3"]

# Step sizes each agent kind needs, keyed by config field name
REQUIRED_STEP_SIZES: dict[str, tuple[str, ...]] = {
    "qlearning": ("action_value_step_size",),
    "qplan-true": ("action_value_step_size",),
    "qplan-em-av": ("action_value_step_size", "model_step_size"),
    "alg1": ("value_step_size", "model_step_size"),
    "alg2": ("value_step_size", "action_value_step_size", "model_step_size"),
    "alg3": ("value_step_size", "policy_step_size", "model_step_size"),
}


class StrictModel(BaseModel):
    """Base for config sections: unknown keys are errors"""
    model_config = ConfigDict(extra="forbid", frozen=True)


class EnvConfig(StrictModel):
    """Environment selection and dynamics parameters"""
    env: Literal["counterexample", "corridor"]
    slip_prob: float = Field(default=1 / 3, ge=0.0, le=1.0, description="Probability a move goes the other way")
    phase_length: int = Field(default=0, ge=0, description="Episodes between goal switches (0 = stationary)")
    goal_side: Literal["left", "right"] = "right"
    corridor_length: int = Field(default=9, ge=1)
    counterexample_b_reward: float = Field(default=-1.0, description="Reward of action B from the start state")
    step_cap: int = Field(default=10_000, ge=1, description="Steps before an episode is truncated")


class FeatureConfig(StrictModel):
    """State-update function"""
    features: Literal["onehot", "random_binary"] = "onehot"
    feature_d: Optional[int] = Field(default=None, ge=1)
    feature_k: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def check_random_binary(self):
        """Random binary codes need 0 < k <= d"""
        if self.features == "random_binary":
            if self.feature_d is None or self.feature_k is None:
                raise ValueError("random_binary features need feature_d and feature_k")
            if self.feature_k > self.feature_d:
                raise ValueError(f"feature_k ({self.feature_k}) must not exceed feature_d ({self.feature_d})")
        return self


class AgentConfig(StrictModel):
    """One learning agent with its step sizes and planning settings"""
    kind: AgentKind
    epsilon: float = Field(default=0.1, ge=0.0, le=1.0, description="Decision-time epsilon-greedy exploration")
    gamma: float = Field(default=1.0, ge=0.0, le=1.0)
    value_step_size: Optional[float] = Field(default=None, gt=0.0)
    action_value_step_size: Optional[float] = Field(default=None, gt=0.0)
    policy_step_size: Optional[float] = Field(default=None, gt=0.0)
    model_step_size: Optional[float] = Field(default=None, gt=0.0)
    model_batch: int = Field(default=16, ge=0, description="Replayed transitions per step for model training")
    planning_steps: int = Field(default=0, ge=0)
    planning_cadence: Literal["step", "episode"] = "step"
    buffer_capacity: int = Field(default=10_000, ge=1)
    buffer_phase_reset: bool = False
    alg2_literal_pseudocode: bool = False
    cache_all_actions: bool = False

    @model_validator(mode="after")
    def check_step_sizes(self):
        """Every head the agent kind trains needs a step size"""
        missing = [name for name in REQUIRED_STEP_SIZES[self.kind] if getattr(self, name) is None]
        if missing:
            raise ValueError(f"Agent kind {self.kind!r} requires {', '.join(missing)}")
        if self.kind == "qlearning" and self.planning_steps:
            raise ValueError("qlearning does not plan; set planning_steps = 0")
        return self


class ExperimentSection(StrictModel):
    """Run protocol"""
    name: str
    episodes: int = Field(ge=1)
    runs: int = Field(default=1, ge=1)
    bin_size: int = Field(default=1, ge=1)
    seed_base: int = Field(default=0, ge=0)
    output: Optional[str] = None
    exclude_diverged: bool = False


class SweepSection(StrictModel):
    """Parameter-study protocol"""
    episodes: int = Field(default=1000, ge=1)
    runs: int = Field(default=30, ge=1)


class ExperimentConfig(StrictModel):
    """A complete experiment: environment, features and one or more agents"""
    experiment: ExperimentSection
    env: EnvConfig
    features: FeatureConfig = FeatureConfig()
    agents: dict[str, AgentConfig]
    sweep: SweepSection = SweepSection()

    @model_validator(mode="after")
    def check_protocol(self):
        """At least one agent; bins must fit in the episode budget"""
        if not self.agents:
            raise ValueError("At least one [agents.<label>] section is required")
        if self.experiment.bin_size > self.experiment.episodes:
            raise ValueError(
                f"bin_size ({self.experiment.bin_size}) exceeds episodes ({self.experiment.episodes})"
            )
        return self
