"""Correlation-ranked feature selection scored by forward-chaining cross-validation."""

import logging
import warnings
from typing import List, Optional, Sequence, Tuple

import numpy as np

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.features import FeatureMatrix
from aquaseries.model import (
    SequenceSet,
    TrainConfig,
    build_sequences,
    fit_sequence_normalization,
    initialize_model,
    normalize_sequences,
    predict_sequences,
    train,
)
from .folds import time_series_folds
from .metrics import rmse
from .schemas import FoldPlan, RankedFeature, SelectionConfig, SelectionResult

logger = logging.getLogger(__name__)

# Correlations are compared after rounding so that exactly antisymmetric features tie.
CORRELATION_DECIMALS = 12


def _abs_correlation(column: np.ndarray, target: np.ndarray) -> float:
    dx = column - column.mean()
    dy = target - target.mean()
    denominator = np.sqrt((dx @ dx) * (dy @ dy))
    if denominator == 0.0:
        return 0.0
    return round(min(abs(float(dx @ dy / denominator)), 1.0), CORRELATION_DECIMALS)


def rank_features(
    matrix: FeatureMatrix, target: Sequence[float], limit: Optional[int] = None
) -> Tuple[List[RankedFeature], List[str], List[str]]:
    """Rank columns by |Pearson r| with the target and drop exactly collinear duplicates.

    Rows with a missing target are ignored. Ties keep column order.

    Args:
        matrix (FeatureMatrix): Candidate columns (training rows only).
        target (Sequence[float]): Target per row.
        limit (Optional[int]): Stop once this many de-duplicated features are ranked.

    Returns:
        Tuple[List[RankedFeature], List[str], List[str]]: The ranking, skipped constant
            columns and candidates dropped as collinear.
    """
    target = np.asarray(target, dtype=np.float64)
    usable = ~np.isnan(target)
    values = matrix.values[usable]
    y = target[usable]
    if y.size < 2 or np.all(y == y[0]):
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="CONSTANT_TARGET",
                error_message="Feature ranking needs a target with at least two distinct values.",
                category=ErrorCategory.DATA,
            )
        )

    skipped = []
    scored = []
    for index, name in enumerate(matrix.names):
        column = values[:, index]
        if np.all(column == column[0]):
            skipped.append(name)
            continue
        scored.append((name, index, _abs_correlation(column, y)))
    if skipped:
        logger.warning("Skipping %d constant feature columns: %s", len(skipped), ", ".join(skipped))
        warnings.warn(
            f"{len(skipped)} constant feature columns were skipped during ranking.",
            UserWarning,
        )
    scored.sort(key=lambda item: -item[2])

    ranking: List[RankedFeature] = []
    kept_columns: List[np.ndarray] = []
    dropped = []
    for name, index, abs_r in scored:
        if limit is not None and len(ranking) >= limit:
            break
        column = values[:, index]
        if any(_abs_correlation(column, other) == 1.0 for other in kept_columns):
            dropped.append(name)
            continue
        ranking.append(RankedFeature(name=name, abs_r=abs_r))
        kept_columns.append(column)
    if dropped:
        logger.info("Dropped %d features collinear with a higher-ranked one", len(dropped))
    return ranking, skipped, dropped


def cross_validate(
    matrix: FeatureMatrix,
    target: Sequence[float],
    sequences: SequenceSet,
    plan: FoldPlan,
    config: TrainConfig,
    epochs: Optional[int] = None,
) -> List[float]:
    """Train one model per fold and return the test RMSE of each fold in parameter units.

    Normalization is fitted on each fold's training windows only; fold j uses seed + j.
    """
    scores = []
    for fold, (train_index, test_index) in enumerate(plan.folds):
        train_set = sequences.subset(train_index)
        test_set = sequences.subset(test_index)
        stats = fit_sequence_normalization(matrix, np.asarray(target), train_set)
        fold_config = config.model_copy(
            update={
                "seed": config.seed + fold,
                "epochs": epochs or config.epochs,
                "normalization": stats,
            }
        )
        model = initialize_model(len(matrix.names), fold_config)
        result = train(model, normalize_sequences(train_set, stats), fold_config)
        estimates = predict_sequences(result.model, normalize_sequences(test_set, stats), stats)
        scores.append(rmse(test_set.targets(), estimates))
    return scores


def select_features(
    matrix: FeatureMatrix,
    target: Sequence[float],
    selection: Optional[SelectionConfig] = None,
    train_config: Optional[TrainConfig] = None,
    folds: Optional[FoldPlan] = None,
) -> SelectionResult:
    """Choose the number of top-ranked features with the lowest cross-validated RMSE.

    Candidates are ranked on the given (training) rows only. For every k in
    [k_min, k_max] the top k features are scored by mean fold RMSE; the lowest mean
    wins and ties go to the smaller k.

    Args:
        matrix (FeatureMatrix): Training-split candidate columns.
        target (Sequence[float]): Target per matrix row.
        selection (Optional[SelectionConfig]): Bounds, fold count and epoch budget.
        train_config (Optional[TrainConfig]): Network settings for the fold models.
        folds (Optional[FoldPlan]): Fold plan over the training windows; built from
            `selection.folds` when omitted.

    Returns:
        SelectionResult: The chosen features with ranking and per-k scores.
    """
    selection = selection or SelectionConfig()
    train_config = train_config or TrainConfig()
    target = np.asarray(target, dtype=np.float64)

    ranking, skipped, dropped = rank_features(matrix, target, limit=selection.k_max)
    if not ranking:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="NO_CANDIDATES",
                error_message="Every candidate feature is constant on the training rows.",
                category=ErrorCategory.DATA,
            )
        )
    k_max = min(selection.k_max, len(ranking))
    k_min = min(selection.k_min, k_max)
    if k_min < selection.k_min:
        logger.warning(
            "Only %d usable features; trying k=%d instead of k_min=%d",
            len(ranking),
            k_min,
            selection.k_min,
        )

    scores = {}
    best_k = None
    for k in range(k_min, k_max + 1):
        names = [item.name for item in ranking[:k]]
        subset = matrix.select(names)
        sequences = build_sequences(
            subset, target, train_config.sequence_length, train_config.pad_sequences
        )
        plan = folds or time_series_folds(len(sequences), selection.folds)
        fold_scores = cross_validate(
            subset, target, sequences, plan, train_config, selection.selection_epochs
        )
        scores[k] = float(np.mean(sorted(fold_scores)))
        logger.info("k=%d mean cross-validated RMSE %.6f", k, scores[k])
        if best_k is None or scores[k] < scores[best_k]:
            best_k = k

    selected = tuple(item.name for item in ranking[:best_k])
    logger.info("Selected %d features: %s", len(selected), ", ".join(selected))
    return SelectionResult(
        selected=selected,
        ranking=tuple(ranking),
        skipped_constant=tuple(skipped),
        dropped_collinear=tuple(dropped),
        scores=scores,
    )
