import numpy as np
import pytest

from emcontrol.agents import (
    CachedActionValueAgent,
    CachedPolicyAgent,
    EpisodeResult,
    ExplorationPolicy,
    LookaheadAgent,
    PolicyParams,
    QLearningAgent,
    QPlanningExpectationAgent,
    QPlanningTrueModelAgent,
    alg2_cache_update,
    alg3_policy_update,
    backup_value,
    backup_values,
    build_agent,
    run_episode,
    select_action_alg1,
)
from emcontrol.core.exceptions import UsageError
from emcontrol.envs import CorridorEnv, CounterexampleMdp
from emcontrol.envs.counterexample import ACTION_A, START
from emcontrol.features import one_hot
from emcontrol.models import align_ztem_from_distribution
from emcontrol.oracles import central_difference, solve_value_iteration
from emcontrol.planning import ActionValueWeights, Transition, ValueWeights
from emcontrol.schemas import AgentConfig


def _agent(kind, env, features=None, seed=0, **fields):
    defaults = {
        "qlearning": {"action_value_step_size": 0.1},
        "qplan-true": {"action_value_step_size": 0.1, "planning_steps": 5},
        "qplan-em-av": {"action_value_step_size": 0.1, "model_step_size": 0.1, "planning_steps": 5},
        "alg1": {"value_step_size": 0.1, "model_step_size": 0.1, "planning_steps": 5},
        "alg2": {"value_step_size": 0.1, "action_value_step_size": 0.1, "model_step_size": 0.1, "planning_steps": 5},
        "alg3": {"value_step_size": 0.1, "policy_step_size": 0.1, "model_step_size": 0.1, "planning_steps": 5},
    }[kind]
    config = AgentConfig(kind=kind, **{**defaults, **fields})
    features = features or one_hot(env.num_states)
    return build_agent(config, env, features, np.random.default_rng(seed), np.random.default_rng(seed + 1)), features


def test_greedy_selection_breaks_ties_low(rng):
    policy = ExplorationPolicy(0.0)
    assert policy.select(np.array([1.0, 3.0, 3.0]), rng) == 1
    assert policy.select(np.zeros(4), rng) == 0


def test_full_exploration_is_uniform(rng):
    policy = ExplorationPolicy(1.0)
    picks = [policy.select(np.array([5.0, 0.0]), rng) for _ in range(10_000)]
    assert abs(np.mean(picks) - 0.5) < 0.03


def test_greedy_probability():
    probs = ExplorationPolicy(0.1).probabilities(np.array([0.0, 2.0]))
    np.testing.assert_allclose(probs, [0.05, 0.95])
    with pytest.raises(UsageError):
        ExplorationPolicy(1.5)


def test_softmax_policy_starts_uniform_and_gradient_matches(rng):
    policy = PolicyParams.zeros(3, 4, step_size=0.1)
    s = np.array([1.0, 0.0, 1.0, 0.0])
    np.testing.assert_allclose(policy.probabilities(s), np.full(3, 1 / 3))

    policy.theta = rng.normal(size=(3, 4))
    analytic = policy.grad_log_prob(s, 2)
    numeric = central_difference(lambda theta: PolicyParams(theta, 0.0).log_prob(s, 2), policy.theta.copy())
    np.testing.assert_allclose(analytic, numeric, atol=1e-8)
    np.testing.assert_allclose(analytic.sum(axis=0), np.zeros(4), atol=1e-12)


def test_policy_update_raises_preferred_action(rng):
    policy = PolicyParams.zeros(2, 2, step_size=0.5)
    s = np.array([1.0, 0.0])
    policy.update(s, 1, delta=1.0)
    assert policy.probabilities(s)[1] > 0.5
    samples = [policy.sample(s, rng) for _ in range(2000)]
    assert np.mean(samples) > 0.5


def test_backup_values_on_counterexample(counterexample_model, onehot3):
    ztem = align_ztem_from_distribution(counterexample_model, onehot3)
    s = onehot3.encode(START)
    np.testing.assert_array_equal(backup_values(s, ztem, np.zeros(3)), [0.0, -1.0])
    assert backup_value(s, ACTION_A, ztem, ValueWeights.zeros(3, 0.1)) == 0.0


def test_select_action_alg1(counterexample_model, onehot3, rng):
    ztem = align_ztem_from_distribution(counterexample_model, onehot3)
    s = onehot3.encode(START)
    assert select_action_alg1(s, ztem, np.zeros(3), ExplorationPolicy(0.0), rng) == ACTION_A

    picks = [select_action_alg1(s, ztem, np.zeros(3), ExplorationPolicy(1.0), rng) for _ in range(10_000)]
    assert abs(np.mean(picks) - 0.5) < 0.03


def test_alg2_cache_update_moves_toward_backup():
    wq = ActionValueWeights.zeros(2, 2, step_size=0.5)
    alg2_cache_update(wq, np.array([1.0, 0.0]), 1, backup=4.0)
    assert wq.value(np.array([1.0, 0.0]), 1) == 2.0
    assert wq.value(np.array([1.0, 0.0]), 0) == 0.0


def test_alg3_policy_update_uses_model_backup(counterexample_model, onehot3):
    ztem = align_ztem_from_distribution(counterexample_model, onehot3)
    theta = PolicyParams.zeros(2, 3, step_size=1.0)
    w = np.array([1.0, 0.0, 0.0])
    delta = alg3_policy_update(theta, onehot3.encode(START), 1, ztem, w)
    # r(start, B) + s_bar . w - w . s = -1 + 0 - 1
    assert delta == -2.0
    assert theta.probabilities(onehot3.encode(START))[1] < 0.5


@pytest.mark.parametrize(
    "kind, cls",
    [
        ("qlearning", QLearningAgent),
        ("qplan-true", QPlanningTrueModelAgent),
        ("qplan-em-av", QPlanningExpectationAgent),
        ("alg1", LookaheadAgent),
        ("alg2", CachedActionValueAgent),
        ("alg3", CachedPolicyAgent),
    ],
)
def test_build_agent_and_play_an_episode(kind, cls):
    env = CounterexampleMdp(np.random.default_rng(0))
    agent, features = _agent(kind, env, buffer_capacity=7)
    assert isinstance(agent, cls)
    assert agent.buffer.capacity == 7

    result = run_episode(agent, env, features)

    assert isinstance(result, EpisodeResult)
    assert result.steps in (1, 2)
    assert result.total_reward in (0.0, -1.0, -5.0)
    assert not result.truncated
    assert len(agent.buffer) == result.steps


def test_qlearning_terminal_target_is_the_reward():
    env = CounterexampleMdp(np.random.default_rng(0))
    agent, features = _agent("qlearning", env, action_value_step_size=1.0)
    s = features.encode(START)
    agent.direct_update(Transition(START, s, 1, -1.0, -1, np.zeros(3), True))
    assert agent.q.value(s, 1) == -1.0


def test_true_model_agent_refreshes_on_goal_switch():
    env = CorridorEnv(np.random.default_rng(0), slip_prob=0.0, phase_length=1)
    agent, features = _agent("qplan-true", env)
    run_episode(agent, env, features)
    first = agent.model
    assert first.r[8, 1] == 19.0

    run_episode(agent, env, features)
    assert env.phase == 1
    assert agent.model.r[0, 0] == 19.0
    assert agent.model is not first


def test_empty_buffer_counts_a_skipped_planning_round():
    env = CounterexampleMdp(np.random.default_rng(0))
    agent, _ = _agent("alg1", env)
    assert agent.plan(5) == 0
    agent._plan(5)
    assert agent.planning_skipped == 1


def test_episode_cadence_plans_once_per_episode():
    env = CorridorEnv(np.random.default_rng(0), slip_prob=0.0)
    agent, features = _agent("alg1", env, planning_steps=3, planning_cadence="episode")
    calls = []
    agent.plan = lambda n: calls.append(n) or n

    result = run_episode(agent, env, features)

    assert calls == [3 * result.steps]


def test_model_trainer_replays_a_batch():
    env = CounterexampleMdp(np.random.default_rng(0))
    agent, features = _agent("alg1", env, model_batch=4)
    s = features.encode(START)
    transition = Transition(START, s, 1, -1.0, -1, np.zeros(3), True)
    agent.buffer.add(transition)
    agent.train_model(transition)
    assert agent.model.stats.count == 5


def test_alg2_direct_update_target_variants():
    env = CorridorEnv(np.random.default_rng(0))
    s, s_next = np.eye(9)[0], np.eye(9)[1]
    transition = Transition(0, s, 0, 1.0, 1, s_next, False)

    targets = {}
    for literal in (False, True):
        agent, _ = _agent("alg2", env, action_value_step_size=1.0, alg2_literal_pseudocode=literal)
        agent.w.w[:2] = [1.0, 2.0]
        agent.direct_update(transition)
        targets[literal] = agent.q.value(s, 0)

    # R + v(s') = 3; TD error = 1 + 2 - 1 = 2
    assert targets == {False: 3.0, True: 2.0}


def test_alg2_caches_every_action_when_asked(counterexample_model, onehot3):
    env = CounterexampleMdp(np.random.default_rng(0))
    agent, _ = _agent("alg2", env, action_value_step_size=1.0, cache_all_actions=True)
    agent.model = align_ztem_from_distribution(counterexample_model, onehot3)
    agent.on_backup(onehot3.encode(START), ACTION_A, 0.0)
    np.testing.assert_array_equal(agent.q.values(onehot3.encode(START)), [0.0, -1.0])


def test_alg1_with_exact_model_learns_optimal_returns():
    env = CorridorEnv(np.random.default_rng(0), slip_prob=0.0)
    agent, features = _agent("alg1", env, planning_steps=20, model_step_size=0.1)
    exact = align_ztem_from_distribution(env.export_true_model(), features)
    agent.model = exact
    agent.trainer.model = exact

    for _ in range(200):
        run_episode(agent, env, features)

    agent.explore = ExplorationPolicy(0.0)
    for start in range(env.num_states):
        env.reset()
        env.state = start
        s, total = features.encode(start), 0.0
        while True:
            step = env.step(agent.select_action(s))
            total += step.reward
            if step.done:
                break
            s = features.encode(step.observation)
        assert total == 20.0 - (env.num_states - start)


@pytest.mark.slow
def test_qlearning_greedy_policy_matches_dynamic_programming():
    optimal = None
    matches = 0
    for seed in range(30):
        env = CorridorEnv(np.random.default_rng(seed), slip_prob=0.0)
        agent, features = _agent("qlearning", env, seed=100 + seed)
        if optimal is None:
            optimal = solve_value_iteration(env.export_true_model()).pi_star
        for _ in range(5000):
            run_episode(agent, env, features)

        greedy = [int(np.argmax(agent.q.values(features.encode(cell)))) for cell in range(env.num_states)]
        matches += greedy == optimal.tolist()

    assert matches >= 29
