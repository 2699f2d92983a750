"""Candidate enumeration and feature evaluation over a match-up table."""

import logging
import warnings
from itertools import permutations
from pathlib import Path
from typing import List, Sequence

import numpy as np

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.spectra import BAND_ORDER, MatchupTable
from aquaseries.utils.files import atomic_write_text
from .schemas import (
    BandFeature,
    FeatureExpr,
    FeatureMatrix,
    LineHeightFeature,
    NormRatioFeature,
    PowerFeature,
    ThreeBandFeature,
)

logger = logging.getLogger(__name__)


def enumerate_candidates() -> List[FeatureExpr]:
    """Return the 136 candidate predictors in a fixed order.

    10 raw bands, 10 squares, 10 cubes, 90 ordered normalized ratios, then 8 three-band
    ratios and 8 line heights over consecutive band triples.
    """
    triples = [tuple(BAND_ORDER[start : start + 3]) for start in range(len(BAND_ORDER) - 2)]
    candidates: List[FeatureExpr] = []
    candidates.extend(BandFeature(band=band) for band in BAND_ORDER)
    candidates.extend(PowerFeature(band=band, exponent=2) for band in BAND_ORDER)
    candidates.extend(PowerFeature(band=band, exponent=3) for band in BAND_ORDER)
    candidates.extend(
        NormRatioFeature(first=first, second=second)
        for first, second in permutations(BAND_ORDER, 2)
    )
    candidates.extend(ThreeBandFeature(bands=triple) for triple in triples)
    candidates.extend(LineHeightFeature(bands=triple) for triple in triples)
    return candidates


def evaluate_features(
    table: MatchupTable, expressions: Sequence[FeatureExpr]
) -> FeatureMatrix:
    """Evaluate expressions for every record of a table.

    Undefined or overflowing values are replaced by 0 and counted per feature.
    Identical expressions are evaluated once.

    Args:
        table (MatchupTable): Non-empty match-up table.
        expressions (Sequence[FeatureExpr]): Features to evaluate, in column order.

    Returns:
        FeatureMatrix: One row per record in table order, one column per unique expression.
    """
    if not len(table):
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="EMPTY_TABLE",
                error_message="Cannot evaluate features on an empty table.",
                category=ErrorCategory.DATA,
            )
        )

    unique: List[FeatureExpr] = []
    seen = set()
    for expression in expressions:
        if expression.name in seen:
            warnings.warn(
                f"Feature {expression.name} requested twice; evaluating it once.",
                UserWarning,
            )
            continue
        seen.add(expression.name)
        unique.append(expression)

    reflectance = table.reflectance_matrix()
    columns = []
    undefined_counts = {}
    for expression in unique:
        column = np.asarray(expression.evaluate(reflectance), dtype=np.float64)
        undefined = ~np.isfinite(column)
        count = int(undefined.sum())
        if count:
            logger.warning(
                "%s undefined for %d of %d records; substituted 0",
                expression.name,
                count,
                len(column),
            )
            column = np.where(undefined, 0.0, column)
        undefined_counts[expression.name] = count
        columns.append(column)

    return FeatureMatrix(
        names=tuple(expression.name for expression in unique),
        values=np.column_stack(columns) if columns else np.empty((len(table), 0)),
        station_ids=tuple(record.station_id for record in table.records),
        dates=tuple(record.timestamp for record in table.records),
        undefined_counts=undefined_counts,
    )


def write_feature_matrix(matrix: FeatureMatrix, path: Path | str) -> Path:
    """Export a feature matrix as CSV with `station_id,date` leading columns."""
    text = matrix.to_frame().to_csv(index=False, lineterminator="\n")
    return atomic_write_text(path, text)
