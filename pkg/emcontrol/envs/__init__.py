"""Episodic environments and their exact tabular dynamics"""
from emcontrol.envs.base import DEFAULT_STEP_CAP, TERMINAL, Environment, RunStreams, Step
from emcontrol.envs.corridor import CorridorEnv
from emcontrol.envs.counterexample import CounterexampleMdp
from emcontrol.envs.tabular import TabularDistributionModel


def export_true_model(env: Environment) -> TabularDistributionModel:
    """Exact (p, termProb, r) of the environment's current phase"""
    return env.export_true_model()


__all__ = [
    "DEFAULT_STEP_CAP",
    "TERMINAL",
    "CorridorEnv",
    "CounterexampleMdp",
    "Environment",
    "RunStreams",
    "Step",
    "TabularDistributionModel",
    "export_true_model",
]
