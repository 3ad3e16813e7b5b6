"""Control agents and the episode loop"""
from emcontrol.agents.action_value import QLearningAgent, QPlanningExpectationAgent, QPlanningTrueModelAgent
from emcontrol.agents.base import Agent, EpisodeResult, ModelTrainer, backup_value, backup_values, run_episode
from emcontrol.agents.factory import AGENT_CLASSES, build_agent
from emcontrol.agents.policies import ExplorationPolicy, PolicyParams
from emcontrol.agents.state_value import (
    CachedActionValueAgent,
    CachedPolicyAgent,
    LookaheadAgent,
    alg2_cache_update,
    alg3_policy_update,
    select_action_alg1,
)

__all__ = [
    "AGENT_CLASSES",
    "Agent",
    "CachedActionValueAgent",
    "CachedPolicyAgent",
    "EpisodeResult",
    "ExplorationPolicy",
    "LookaheadAgent",
    "ModelTrainer",
    "PolicyParams",
    "QLearningAgent",
    "QPlanningExpectationAgent",
    "QPlanningTrueModelAgent",
    "alg2_cache_update",
    "alg3_policy_update",
    "backup_value",
    "backup_values",
    "build_agent",
    "run_episode",
]
