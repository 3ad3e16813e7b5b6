import numpy as np
import pytest

from emcontrol.core.exceptions import UsageError
from emcontrol.envs import TERMINAL
from emcontrol.features import build_feature_map, generate_random_binary_table, one_hot


def test_one_hot_encoding():
    fmap = one_hot(3)
    np.testing.assert_array_equal(fmap.encode(1), [0.0, 1.0, 0.0])
    np.testing.assert_array_equal(fmap.encode(TERMINAL), np.zeros(3))
    assert fmap.d == 3 and fmap.is_one_hot


def test_unknown_observation_raises():
    with pytest.raises(UsageError):
        one_hot(3).encode(3)


def test_encode_returns_a_copy_and_table_is_frozen():
    fmap = one_hot(2)
    s = fmap.encode(0)
    s[0] = 5.0
    assert fmap.encode(0)[0] == 1.0
    with pytest.raises(ValueError):
        fmap.table[0, 0] = 2.0


def test_random_binary_codes_have_k_active_bits():
    fmap = generate_random_binary_table(9, 14, 5, seed=0)
    assert fmap.table.shape == (9, 14)
    np.testing.assert_array_equal(fmap.table.sum(axis=1), np.full(9, 5.0))
    assert set(np.unique(fmap.table)) <= {0.0, 1.0}
    assert not fmap.is_one_hot


def test_random_binary_is_seeded():
    first = generate_random_binary_table(9, 14, 5, seed=3)
    second = generate_random_binary_table(9, 14, 5, seed=np.random.default_rng(3))
    np.testing.assert_array_equal(first.table, second.table)


def test_k_larger_than_d_raises():
    with pytest.raises(UsageError):
        generate_random_binary_table(4, 3, 4, seed=0)


def test_collisions_are_counted():
    fmap = generate_random_binary_table(10, 1, 1, seed=0)
    assert fmap.collisions == 9


def test_build_feature_map_requires_d_and_k(rng):
    assert build_feature_map("onehot", 4, rng).d == 4
    assert build_feature_map("random_binary", 4, rng, d=6, k=2).d == 6
    with pytest.raises(UsageError):
        build_feature_map("random_binary", 4, rng)
