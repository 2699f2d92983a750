"""Z-score normalization fitted on the training split."""

import logging

import numpy as np

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.features import FeatureMatrix
from .schemas import NormalizationStats, SequenceSet

logger = logging.getLogger(__name__)


def fit_normalization(matrix: FeatureMatrix, targets: np.ndarray) -> NormalizationStats:
    """Fit per-feature and target mean and population standard deviation.

    Zero-variance columns keep a scale of 1. Rows whose target is NaN are left out of
    every statistic so that features and targets describe the same records.
    """
    targets = np.asarray(targets, dtype=np.float64)
    usable = ~np.isnan(targets)
    if not usable.any():
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="EMPTY_TRAINING_SPLIT",
                error_message="No training rows with a target value to fit normalization on.",
                category=ErrorCategory.DATA,
            )
        )
    values = matrix.values[usable]
    feature_std = values.std(axis=0)
    constant = [name for name, std in zip(matrix.names, feature_std) if std == 0.0]
    if constant:
        logger.info("Zero-variance features kept unscaled: %s", ", ".join(constant))
    target_std = float(targets[usable].std())
    return NormalizationStats(
        feature_names=matrix.names,
        feature_mean=[float(value) for value in values.mean(axis=0)],
        feature_std=[float(std) if std > 0.0 else 1.0 for std in feature_std],
        target_mean=float(targets[usable].mean()),
        target_std=target_std if target_std > 0.0 else 1.0,
    )


def apply_normalization(matrix: FeatureMatrix, stats: NormalizationStats) -> FeatureMatrix:
    """Return a matrix normalized with previously fitted statistics.

    Raises:
        AquaSeriesException: If the matrix columns differ from the fitted features.
    """
    if tuple(matrix.names) != tuple(stats.feature_names):
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="FEATURE_MISMATCH",
                error_message=(
                    f"Normalization was fitted on {list(stats.feature_names)}, "
                    f"matrix has {list(matrix.names)}."
                ),
                category=ErrorCategory.DATA,
            )
        )
    return matrix.model_copy(update={"values": stats.normalize_features(matrix.values)})


def fit_sequence_normalization(
    matrix: FeatureMatrix, targets: np.ndarray, sequences: SequenceSet
) -> NormalizationStats:
    """Fit statistics on the matrix rows that end the given windows."""
    rows = [item.row for item in sequences.windows]
    return fit_normalization(matrix.take_rows(rows), np.asarray(targets)[rows])


def normalize_sequences(sequences: SequenceSet, stats: NormalizationStats) -> SequenceSet:
    """Return windows and targets in normalized units."""
    windows = tuple(
        item.model_copy(
            update={
                "window": stats.normalize_features(item.window),
                "target": float(stats.normalize_targets(np.array([item.target]))[0]),
            }
        )
        for item in sequences.windows
    )
    return sequences.model_copy(update={"windows": windows})
