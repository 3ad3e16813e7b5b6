"""Machine checks of the planning equivalences and the oracle anchors"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from emcontrol.core.exceptions import UsageError
from emcontrol.core.logging_config import get_logger
from emcontrol.envs import CorridorEnv, CounterexampleMdp
from emcontrol.envs.counterexample import ACTION_A, ACTION_B, LEAF_A_GOOD, LEAF_B_GOOD, START
from emcontrol.features import one_hot
from emcontrol.models import align_ztem_from_distribution, align_ztem_from_geem, geem_from_distribution
from emcontrol.oracles import (
    bellman_residual,
    check_model_gradients,
    check_softmax_log_gradient,
    check_value_update_gradient,
    enumerate_theorem_checks,
    max_swap_witness,
    evaluate_epsilon_greedy,
    solve_value_iteration,
)
from emcontrol.planning import aavi_target, aavi_target_distribution, avi_target, evi_target, levi_target


logger = get_logger(__name__)

THEOREM_TOLERANCE = 1e-12
NEGATIVE_CONTROL_THRESHOLD = 1e-3
THEOREM_SIZES = ((1, 1, 10), (3, 2, 1000), (6, 3, 1000))


@dataclass(frozen=True)
class CheckResult:
    check: str
    passed: bool
    value: float
    detail: str


def check_theorems(seed: int = 0) -> list[CheckResult]:
    results = []
    for n, num_actions, trials in THEOREM_SIZES:
        report = enumerate_theorem_checks(n, num_actions, trials, seed)
        results.append(CheckResult(
            check="theorems",
            passed=report.max_deviation < THEOREM_TOLERANCE,
            value=report.max_deviation,
            detail=(
                f"n={n} |A|={num_actions} trials={trials}: max |LEVI-AVI|={report.max_avi_deviation:.3e}, "
                f"max |LEVI-EVI|={report.max_evi_deviation:.3e}"
            ),
        ))
    return results


def check_negative_control(seed: int = 0, perturbation: float = 0.1) -> list[CheckResult]:
    """A mis-aligned model must be caught by the same enumeration"""
    report = enumerate_theorem_checks(6, 3, 1000, seed, perturbation=perturbation)
    caught = min(report.max_avi_deviation, report.max_evi_deviation)
    return [CheckResult(
        check="negative_control",
        passed=caught > NEGATIVE_CONTROL_THRESHOLD,
        value=caught,
        detail=(
            f"perturbation {perturbation}: max |LEVI-AVI|={report.max_avi_deviation:.3e}, "
            f"max |LEVI-EVI|={report.max_evi_deviation:.3e}"
        ),
    )]


def check_max_swap() -> list[CheckResult]:
    lhs, rhs = max_swap_witness()
    witness = CheckResult(
        check="max_swap",
        passed=lhs == 0.0 and rhs == -2.5,
        value=lhs - rhs,
        detail=f"lhs={lhs} rhs={rhs}",
    )

    # The same gap through the two action-value planning targets
    dm = CounterexampleMdp(np.random.default_rng(0)).export_true_model()
    fmap = one_hot(dm.num_states)
    wq = solve_value_iteration(dm).q_star.T.copy()
    distribution_form = aavi_target_distribution(START, ACTION_A, dm, wq, fmap, 1.0)
    expectation_form = aavi_target(fmap.encode(START), ACTION_A, align_ztem_from_distribution(dm, fmap), wq, 1.0)
    gap = distribution_form - expectation_form
    targets = CheckResult(
        check="max_swap",
        passed=abs(gap - 2.5) < THEOREM_TOLERANCE,
        value=gap,
        detail=f"AAVI distribution form {distribution_form} vs expectation form {expectation_form}",
    )
    return [witness, targets]


def check_dp_anchors() -> list[CheckResult]:
    results = []
    rng = np.random.default_rng(0)

    counterexample = CounterexampleMdp(rng).export_true_model()
    solution = solve_value_iteration(counterexample)
    q = solution.q_star
    expected_q = {
        (LEAF_A_GOOD, ACTION_A): 0.0,
        (LEAF_A_GOOD, ACTION_B): -5.0,
        (LEAF_B_GOOD, ACTION_A): -5.0,
        (LEAF_B_GOOD, ACTION_B): 0.0,
        (START, ACTION_A): 0.0,
        (START, ACTION_B): -1.0,
    }
    worst = max(abs(q[key] - value) for key, value in expected_q.items())
    results.append(CheckResult("dp_anchors", worst == 0.0, worst, f"counterexample q* = {q.tolist()}"))

    values = evaluate_epsilon_greedy(counterexample, solution, epsilon=0.1)
    expected_v = np.array([0.95 * -0.25 + 0.05 * -1.0, -0.25, -0.25])
    worst = float(np.abs(values - expected_v).max())
    results.append(CheckResult(
        "dp_anchors", worst < 1e-12, worst, f"epsilon-greedy (0.1) values {values.tolist()}",
    ))

    corridor = CorridorEnv(rng, slip_prob=0.0).export_true_model()
    solution = solve_value_iteration(corridor)
    distances = corridor.num_states - np.arange(corridor.num_states)
    worst = float(np.abs(solution.v_star - (20.0 - distances)).max())
    results.append(CheckResult(
        "dp_anchors", worst < 1e-12, worst, f"deterministic corridor v* = {solution.v_star.tolist()}",
    ))

    stochastic = CorridorEnv(rng, slip_prob=1 / 3).export_true_model()
    solution = solve_value_iteration(stochastic)
    v = solution.v_star
    identity_gap = abs(v[-1] - (37.0 / 3.0 + v[-2] / 3.0))
    residual = bellman_residual(stochastic, v, 1.0)
    results.append(CheckResult(
        "dp_anchors",
        identity_gap < 1e-9 and residual < 1e-9,
        max(identity_gap, residual),
        f"slip 1/3 corridor: goal-adjacent identity gap {identity_gap:.3e}, Bellman residual {residual:.3e}",
    ))
    return results


def check_gradients(points: int = 100, seed: int = 0) -> list[CheckResult]:
    checks = [
        check_softmax_log_gradient(points, seed),
        *check_model_gradients(points, seed),
        check_value_update_gradient(points, seed),
    ]
    return [
        CheckResult(
            "gradients",
            check.passed,
            check.max_relative_error,
            f"{check.name}: max relative error {check.max_relative_error:.3e} over {check.points} points "
            f"(tolerance {check.tolerance:g})",
        )
        for check in checks
    ]


def check_alignment(seed: int = 0) -> list[CheckResult]:
    """AVI, EVI and LEVI agree on the true models of both environments"""
    rng = np.random.default_rng(seed)
    models = {
        "counterexample": CounterexampleMdp(rng).export_true_model(),
        "corridor slip 1/3": CorridorEnv(rng, slip_prob=1 / 3).export_true_model(),
        "corridor slip 1/10": CorridorEnv(rng, slip_prob=0.1, goal_side="left").export_true_model(),
    }
    results = []
    for name, dm in models.items():
        fmap = one_hot(dm.num_states)
        ztem = align_ztem_from_distribution(dm, fmap)
        geem = geem_from_distribution(dm, fmap)
        aligned = align_ztem_from_geem(geem)
        w = rng.uniform(-1.0, 1.0, size=dm.num_states)
        worst = 0.0
        for state in range(dm.num_states):
            s = fmap.encode(state)
            levi = levi_target(s, ztem, w, 1.0)
            worst = max(
                worst,
                abs(levi - avi_target(state, dm, w, fmap, 1.0)),
                abs(levi_target(s, aligned, w, 1.0) - evi_target(s, geem, w, 1.0)),
            )
        results.append(CheckResult("alignment", worst < THEOREM_TOLERANCE, worst, f"{name}: max deviation {worst:.3e}"))
    return results


CHECKS: dict[str, Callable[[], list[CheckResult]]] = {
    "theorems": check_theorems,
    "negative_control": check_negative_control,
    "max_swap": check_max_swap,
    "dp_anchors": check_dp_anchors,
    "gradients": check_gradients,
    "alignment": check_alignment,
}

# Alternative names accepted by `run_checks` and `verify --only`
CHECK_ALIASES: dict[str, str] = {
    "eq14": "max_swap",
}


def run_checks(only: list[str] | None = None) -> list[CheckResult]:
    names = [CHECK_ALIASES.get(name, name) for name in only] if only else list(CHECKS)
    unknown = [name for name in names if name not in CHECKS]
    if unknown:
        raise UsageError(f"Unknown check(s) {', '.join(unknown)}; choose from {', '.join(CHECKS)}")
    names = list(dict.fromkeys(names))

    results = []
    for name in names:
        check_results = CHECKS[name]()
        failed = sum(not r.passed for r in check_results)
        if failed:
            logger.error(f"Check {name}: {failed} of {len(check_results)} failed")
        else:
            logger.info(f"Check {name}: passed")
        results.extend(check_results)
    return results


def format_report(results: list[CheckResult]) -> str:
    width = max(len(r.check) for r in results) if results else 0
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.check:<{width}}  {r.detail}" for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed} passed, {failed} failed")
    return "\n".join(lines)


def write_report_csv(path: str | Path, results: list[CheckResult]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as file:
        writer = csv.writer(file, lineterminator="\n")
        writer.writerow(["check", "passed", "value", "detail"])
        for r in results:
            writer.writerow([r.check, int(r.passed), repr(float(r.value)), r.detail])
    return path
