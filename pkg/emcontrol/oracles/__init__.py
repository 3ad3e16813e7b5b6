"""Independent ground truth: exact dynamic programming, theorem enumeration and gradient checks"""
from emcontrol.oracles.dynamic_programming import (
    TabularSolution,
    action_values,
    bellman_residual,
    epsilon_greedy_policy,
    evaluate_epsilon_greedy,
    evaluate_policy,
    solve_value_iteration,
)
from emcontrol.oracles.gradients import (
    GradientCheck,
    central_difference,
    check_model_gradients,
    check_softmax_log_gradient,
    check_value_update_gradient,
    relative_error,
)
from emcontrol.oracles.theorems import TheoremReport, enumerate_theorem_checks, max_swap_witness

__all__ = [
    "GradientCheck",
    "TabularSolution",
    "TheoremReport",
    "action_values",
    "bellman_residual",
    "central_difference",
    "check_model_gradients",
    "check_softmax_log_gradient",
    "check_value_update_gradient",
    "enumerate_theorem_checks",
    "epsilon_greedy_policy",
    "max_swap_witness",
    "evaluate_epsilon_greedy",
    "evaluate_policy",
    "relative_error",
    "solve_value_iteration",
]
