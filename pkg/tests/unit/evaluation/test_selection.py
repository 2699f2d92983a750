"""Unit tests for feature ranking, cross-validation and feature-count selection."""

from datetime import date
from unittest.mock import patch

import numpy as np
import pytest
from pydantic import ValidationError

from aquaseries.errors import AquaSeriesException
from aquaseries.evaluation import (
    SelectionConfig,
    cross_validate,
    rank_features,
    select_features,
    time_series_folds,
)
from aquaseries.features import FeatureMatrix
from aquaseries.model import TrainConfig, build_sequences


def _matrix(columns):
    names = tuple(columns)
    values = np.column_stack([np.asarray(columns[name], dtype=float) for name in names])
    rows = values.shape[0]
    return FeatureMatrix(
        names=names,
        values=values,
        station_ids=("S1",) * rows,
        dates=tuple(date(2015 + row // 12, row % 12 + 1, 1) for row in range(rows)),
    )


@pytest.fixture
def target():
    """Twenty-four monthly target values."""
    return np.random.default_rng(0).normal(10.0, 2.0, 24)


@pytest.fixture
def candidates(target):
    """Columns with known correlations to the target."""
    rng = np.random.default_rng(1)
    return _matrix(
        {
            "noise": rng.normal(size=24),
            "flat": np.full(24, 0.3),
            "good": target + rng.normal(0.0, 0.5, 24),
            "exact": 2.0 * target + 1.0,
            "mirror": -target,
            "fair": target + rng.normal(0.0, 2.0, 24),
        }
    )


@pytest.fixture
def fast_train():
    """Tiny fold models."""
    return TrainConfig(
        epochs=3, batch_size=8, sequence_length=1, dropout_rate=0.0, hidden_dim=3, seed=0
    )


def test_rank_by_absolute_correlation(candidates, target):
    """Stronger |r| ranks first; exact collinear copies and constants are left out."""
    with pytest.warns(UserWarning, match="constant"):
        ranking, skipped, dropped = rank_features(candidates, target)
    names = [item.name for item in ranking]
    assert names[:3] == ["exact", "good", "fair"]
    assert ranking[0].abs_r == 1.0
    assert skipped == ["flat"]
    assert dropped == ["mirror"]
    assert all(a.abs_r >= b.abs_r for a, b in zip(ranking, ranking[1:]))


def test_rank_limit(candidates, target):
    """limit caps the number of ranked features."""
    with pytest.warns(UserWarning):
        ranking, _, _ = rank_features(candidates, target, limit=2)
    assert [item.name for item in ranking] == ["exact", "good"]


def test_rank_ignores_missing_targets(target):
    """Rows without a target are not correlated."""
    column = target.copy()
    column[0] = 1e6
    with_gap = target.copy()
    with_gap[0] = np.nan
    ranking, _, _ = rank_features(_matrix({"a": column}), with_gap)
    assert ranking[0].abs_r == 1.0


def test_constant_target_rejected(candidates):
    """Ranking against a constant target is undefined."""
    with pytest.raises(AquaSeriesException) as exc_info:
        rank_features(candidates, np.full(24, 3.0))
    assert exc_info.value.error_code == "CONSTANT_TARGET"


def test_selection_config_bounds():
    """k_min may not exceed k_max."""
    with pytest.raises(ValidationError):
        SelectionConfig(k_min=5, k_max=3)
    assert SelectionConfig().k_max == 12


def _scores_by_width(table):
    def fake_cross_validate(subset, target, sequences, plan, config, epochs=None):
        return table[len(subset.names)]

    return fake_cross_validate


def test_lowest_mean_rmse_wins(candidates, target, fast_train):
    """The feature count with the lowest mean fold RMSE is selected."""
    scores = {1: [3.0, 3.0], 2: [1.0, 2.0], 3: [2.0, 2.0]}
    with patch(
        "aquaseries.evaluation.selection.cross_validate", side_effect=_scores_by_width(scores)
    ):
        with pytest.warns(UserWarning):
            result = select_features(
                candidates, target, SelectionConfig(k_min=1, k_max=3, folds=2), fast_train
            )
    assert result.selected == ("exact", "good")
    assert result.k == 2
    assert result.scores == {1: 3.0, 2: 1.5, 3: 2.0}


def test_ties_go_to_fewer_features(candidates, target, fast_train):
    """Equal mean RMSE keeps the smaller k."""
    scores = {1: [2.0], 2: [1.0], 3: [1.0]}
    with patch(
        "aquaseries.evaluation.selection.cross_validate", side_effect=_scores_by_width(scores)
    ):
        with pytest.warns(UserWarning):
            result = select_features(
                candidates, target, SelectionConfig(k_min=1, k_max=3, folds=2), fast_train
            )
    assert result.k == 2


def test_k_range_shrinks_to_available_features(target, fast_train):
    """With fewer usable features than k_min, every usable feature is tried."""
    rng = np.random.default_rng(3)
    matrix = _matrix({"a": target + rng.normal(size=24), "b": rng.normal(size=24)})
    scores = {1: [2.0], 2: [1.0]}
    with patch(
        "aquaseries.evaluation.selection.cross_validate", side_effect=_scores_by_width(scores)
    ):
        result = select_features(
            matrix, target, SelectionConfig(k_min=3, k_max=5, folds=2), fast_train
        )
    assert result.k == 2
    assert set(result.scores) == {2}


def test_all_constant_candidates(target, fast_train):
    """Nothing to select when every column is constant."""
    matrix = _matrix({"a": np.ones(24), "b": np.zeros(24)})
    with pytest.warns(UserWarning):
        with pytest.raises(AquaSeriesException) as exc_info:
            select_features(matrix, target, SelectionConfig(k_min=1, k_max=2), fast_train)
    assert exc_info.value.error_code == "NO_CANDIDATES"


def test_cross_validate_scores_each_fold(candidates, target, fast_train):
    """One finite RMSE per fold, reproducible for a fixed seed."""
    subset = candidates.select(["good", "fair"])
    sequences = build_sequences(subset, target, 1)
    plan = time_series_folds(len(sequences), 3)
    first = cross_validate(subset, target, sequences, plan, fast_train)
    second = cross_validate(subset, target, sequences, plan, fast_train)
    assert len(first) == 3
    assert all(np.isfinite(score) and score >= 0.0 for score in first)
    assert first == second


def test_select_features_end_to_end(candidates, target, fast_train):
    """A real selection run returns a prefix of the ranking."""
    with pytest.warns(UserWarning):
        result = select_features(
            candidates,
            target,
            SelectionConfig(k_min=1, k_max=2, folds=2, selection_epochs=2),
            fast_train,
        )
    assert 1 <= result.k <= 2
    assert list(result.selected) == result.ranked_names()[: result.k]
    assert set(result.scores) == {1, 2}
