import numpy as np
import pytest

from emcontrol.core.exceptions import UsageError
from emcontrol.harness.curves import (
    CurveRepository,
    LearningCurve,
    bin_curve,
    bin_standard_error,
    recovery_bins,
)


@pytest.mark.parametrize(
    "per_run, bin_size, expected",
    [
        ([[1, 2, 3, 4]], 2, [1.5, 3.5]),
        ([[1, 1], [3, 3]], 2, [2.0]),
        ([[1, 2], [3, 6]], 1, [2.0, 4.0]),
        ([[1, 2, 3, 4, 5]], 2, [1.5, 3.5]),
    ],
)
def test_bin_curve(per_run, bin_size, expected):
    np.testing.assert_array_equal(bin_curve(per_run, bin_size), expected)


def test_bin_curve_errors():
    with pytest.raises(UsageError):
        bin_curve([[1, 2]], 3)
    with pytest.raises(UsageError):
        bin_curve([[1, 2]], 0)
    with pytest.raises(UsageError):
        bin_curve([], 1)


def test_standard_error():
    np.testing.assert_allclose(bin_standard_error([[1, 1], [3, 3]], 2), [1.0])
    np.testing.assert_array_equal(bin_standard_error([[1, 2, 3, 4]], 2), [0.0, 0.0])


def test_recovery_bins():
    binned = [5, 8, 10, -4, 9.5, 10, 0, 2, 3]
    assert recovery_bins(binned, bins_per_phase=3) == [2, None]


def test_recovery_with_negative_reference():
    # reference -10 gives threshold -11
    assert recovery_bins([-10, -10.5, -20], bins_per_phase=1) == [1, None]


def test_learning_curve_properties():
    curve = LearningCurve("q", np.array([[1.0, 2.0, 3.0, 4.0], [3.0, 4.0, 5.0, 6.0]]), 2, (0, 1))
    assert (curve.runs, curve.episodes) == (2, 4)
    np.testing.assert_array_equal(curve.bin_starts, [0, 2])
    np.testing.assert_array_equal(curve.binned, [2.5, 4.5])
    assert curve.final_bin_mean == 4.5
    assert curve.final_bin_se == pytest.approx(1.0)


def test_repository_round_trip(tmp_path):
    per_run = np.array([[0.1, -1.0, 19.0], [2.0, 0.0, -0.25]])
    curve = LearningCurve("alg1", per_run, 1, (5, 6))

    paths = CurveRepository.write_curve(tmp_path, curve)

    assert [p.name for p in paths] == ["alg1.runs.csv", "alg1.binned.csv", "alg1.binned_se.csv"]
    assert paths[0].read_text().splitlines()[:2] == ["episode,run,total_reward", "0,5,0.1"]
    read, run_ids = CurveRepository.read_runs(paths[0])
    np.testing.assert_array_equal(read, per_run)
    assert run_ids == (5, 6)

    starts, values = CurveRepository.read_binned(paths[1])
    np.testing.assert_array_equal(starts, [0, 1, 2])
    np.testing.assert_array_equal(values, curve.binned)
    assert paths[2].read_text().startswith("bin_start,se_total_reward\n")


def test_read_runs_rejects_bad_files(tmp_path):
    wrong_header = tmp_path / "bad.csv"
    wrong_header.write_text("ep,run,reward\n0,0,1.0\n")
    with pytest.raises(UsageError):
        CurveRepository.read_runs(wrong_header)

    ragged = tmp_path / "ragged.csv"
    ragged.write_text("episode,run,total_reward\n0,0,1.0\n1,0,1.0\n0,1,1.0\n")
    with pytest.raises(UsageError):
        CurveRepository.read_runs(ragged)

    with pytest.raises(UsageError):
        CurveRepository.read_binned(wrong_header)
