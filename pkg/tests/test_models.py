import csv

import numpy as np
import pytest

from emcontrol.core.exceptions import DivergenceError, UnsupportedModelError, UsageError
from emcontrol.envs import CorridorEnv
from emcontrol.envs.counterexample import ACTION_A, ACTION_B, LEAF_A_GOOD, START
from emcontrol.features import generate_random_binary_table, one_hot
from emcontrol.models import (
    Geem,
    Ztem,
    align_ztem_from_distribution,
    align_ztem_from_geem,
    geem_from_distribution,
    write_ztem_csv,
)


def test_ztem_predict():
    F = np.zeros((2, 2, 2))
    F[1] = [[0.0, 1.0], [0.5, 0.0]]
    b = np.array([[1.0, 2.0], [3.0, 4.0]])
    model = Ztem(F, b)

    reward, s_bar = model.predict(np.array([1.0, 0.0]), 1)

    assert reward == 3.0
    np.testing.assert_array_equal(s_bar, [0.0, 0.5])
    rewards, next_states = model.predict_all(np.array([0.0, 1.0]))
    np.testing.assert_array_equal(rewards, [2.0, 4.0])
    np.testing.assert_array_equal(next_states[1], [1.0, 0.0])


def test_learn_step_moves_along_the_error():
    model = Ztem.zeros(num_actions=2, d=3, step_size=0.5)
    s = np.array([1.0, 0.0, 0.0])
    s_next = np.array([0.0, 1.0, 0.0])

    stats = model.learn_step(s, 0, 2.0, s_next)

    np.testing.assert_array_equal(model.F[0][:, 0], [0.0, 0.5, 0.0])
    np.testing.assert_array_equal(model.b[0], [1.0, 0.0, 0.0])
    np.testing.assert_array_equal(model.F[1], np.zeros((3, 3)))
    assert stats.count == 1
    assert stats.transition_loss == 1.0
    assert stats.reward_loss == 4.0


def test_terminal_transition_pulls_prediction_to_zero():
    model = Ztem(np.ones((1, 2, 2)), np.zeros((1, 2)), step_size=1.0)
    s = np.array([1.0, 0.0])
    model.learn_step(s, 0, 0.0, np.zeros(2))
    np.testing.assert_array_equal(model.predict(s, 0)[1], np.zeros(2))


def test_zero_step_size_leaves_model_unchanged():
    model = Ztem.zeros(1, 2, step_size=0.0)
    model.learn_step(np.ones(2), 0, 1.0, np.ones(2))
    np.testing.assert_array_equal(model.F, np.zeros((1, 2, 2)))
    assert model.stats.count == 1


def test_divergence_is_reported():
    model = Ztem.zeros(1, 2, step_size=1e200)
    with np.errstate(over="ignore", invalid="ignore"):
        with pytest.raises(DivergenceError):
            model.learn_step(np.full(2, 1e200), 0, 1.0, np.ones(2))


def test_shape_checks():
    with pytest.raises(UsageError):
        Ztem(np.zeros((1, 2, 3)), np.zeros((1, 2)))
    with pytest.raises(UsageError):
        Ztem.zeros(1, 2, 0.1).predict(np.zeros(3), 0)
    with pytest.raises(UsageError):
        Ztem.zeros(1, 2, 0.1).predict(np.zeros(2), 1)


def test_write_ztem_csv(tmp_path):
    model = Ztem.zeros(2, 3, 0.1)
    path = write_ztem_csv(model, tmp_path / "model.csv")
    with open(path, newline="") as file:
        rows = list(csv.reader(file))
    assert rows[0] == ["action", "row", "col", "value"]
    assert len(rows) - 1 == 2 * 3 * 3 + 2 * 3
    assert sum(row[2] == "-1" for row in rows[1:]) == 2 * 3


def test_alignment_from_distribution_on_counterexample(counterexample_model, onehot3):
    ztem = align_ztem_from_distribution(counterexample_model, onehot3)

    reward, s_bar = ztem.predict(onehot3.encode(START), ACTION_A)
    assert reward == 0.0
    np.testing.assert_array_equal(s_bar, [0.0, 0.5, 0.5])

    reward, s_bar = ztem.predict(onehot3.encode(START), ACTION_B)
    assert reward == -1.0
    np.testing.assert_array_equal(s_bar, np.zeros(3))

    reward, s_bar = ztem.predict(onehot3.encode(LEAF_A_GOOD), ACTION_B)
    assert reward == -5.0
    np.testing.assert_array_equal(s_bar, np.zeros(3))


def test_alignment_rejects_non_one_hot(counterexample_model):
    fmap = generate_random_binary_table(3, 4, 2, seed=0)
    with pytest.raises(UnsupportedModelError):
        align_ztem_from_distribution(counterexample_model, fmap)


def test_geem_from_distribution(counterexample_model, onehot3):
    geem = geem_from_distribution(counterexample_model, onehot3)

    reward, s_hat, beta = geem.predict(onehot3.encode(START), ACTION_A)
    assert (reward, beta) == (0.0, 0.0)
    np.testing.assert_array_equal(s_hat, [0.0, 0.5, 0.5])

    _, s_hat, beta = geem.predict(onehot3.encode(START), ACTION_B)
    assert beta == 1.0
    np.testing.assert_array_equal(s_hat, np.zeros(3))


def test_geem_aligned_ztem_scales_by_survival():
    geem = Geem(
        reward=np.array([[1.0, 2.0]]),
        next_state=np.array([[[0.0, 1.0], [1.0, 0.0]]]),
        termination=np.array([[0.25, 1.0]]),
    )
    aligned = align_ztem_from_geem(geem)

    reward, s_bar = aligned.predict(np.array([1.0, 0.0]), 0)
    assert reward == 1.0
    np.testing.assert_array_equal(s_bar, [0.0, 0.75])

    rewards, s_bars = aligned.predict_all(np.array([0.0, 1.0]))
    np.testing.assert_array_equal(rewards, [2.0])
    np.testing.assert_array_equal(s_bars, [[0.0, 0.0]])


def test_geem_rejects_bad_termination():
    with pytest.raises(UsageError):
        Geem(np.zeros((1, 2)), np.zeros((1, 2, 2)), np.full((1, 2), 1.5))


def test_aligned_expected_next_state_matches_true_mean(stochastic_corridor_model):
    fmap = one_hot(stochastic_corridor_model.num_states)
    ztem = align_ztem_from_distribution(stochastic_corridor_model, fmap)
    for state in range(fmap.num_observations):
        for action in range(2):
            expected = stochastic_corridor_model.p[state, action] @ fmap.table
            np.testing.assert_allclose(ztem.predict(fmap.encode(state), action)[1], expected, atol=1e-15)


def _corridor_log(features, n, seed=0):
    """Transitions from a uniformly random policy on the stochastic corridor"""
    env = CorridorEnv(np.random.default_rng(seed), slip_prob=1 / 3)
    rng = np.random.default_rng(seed + 1)
    log = []
    observation = env.reset()
    while len(log) < n:
        action = int(rng.integers(env.num_actions))
        step = env.step(action)
        s_next = np.zeros(features.d) if step.terminal else features.encode(step.observation)
        log.append((features.encode(observation), action, step.reward, s_next))
        observation = env.reset() if step.done else step.observation
    return log


def _transition_loss(model, log):
    return float(np.mean([np.sum((model.predict(s, a)[1] - s_next) ** 2) for s, a, _, s_next in log]))


@pytest.mark.parametrize("features", [one_hot(9), generate_random_binary_table(9, 14, 5, seed=3)])
def test_one_small_epoch_does_not_increase_batch_loss(features):
    log = _corridor_log(features, 1000)
    model = Ztem.zeros(2, features.d, step_size=1e-3)

    before = _transition_loss(model, log)
    for s, a, reward, s_next in log:
        model.learn_step(s, a, reward, s_next)
    after = _transition_loss(model, log)

    assert after < before
