"""Arrange per-station records into fixed-length LSTM input windows."""

import logging
from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

import numpy as np

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.features import FeatureMatrix
from .schemas import SequenceSet, SequenceWindow

logger = logging.getLogger(__name__)


def build_sequences(
    matrix: FeatureMatrix,
    targets: Sequence[float],
    sequence_length: int,
    pad: bool = False,
) -> SequenceSet:
    """Build one window per run of `sequence_length` consecutive records of a station.

    Each station's rows are taken in date order. The target of a window is the value at
    its final record; windows ending on a missing (NaN) target are skipped. Stations with
    fewer records than the window length contribute nothing unless `pad` is set, in which
    case short histories are left-padded with the station's earliest record.

    Args:
        matrix (FeatureMatrix): Feature rows with station/date metadata.
        targets (Sequence[float]): Target per matrix row.
        sequence_length (int): Window length W.
        pad (bool): Left-pad windows ending before the W-th record.

    Returns:
        SequenceSet: Windows sorted by final-record date, ties by station.

    Raises:
        AquaSeriesException: If W < 1, targets do not align with the matrix, or a
            station has two records on the same date.
    """
    if sequence_length < 1:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="INVALID_SEQUENCE_LENGTH",
                error_message=f"Sequence length must be >= 1, got {sequence_length}.",
                category=ErrorCategory.CONFIG,
            )
        )
    targets = np.asarray(targets, dtype=np.float64)
    if targets.shape != (len(matrix),):
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="DIMENSION_MISMATCH",
                error_message=f"{targets.size} targets for {len(matrix)} feature rows.",
                category=ErrorCategory.DATA,
            )
        )

    rows_by_station: Dict[str, List[int]] = defaultdict(list)
    for row, station in enumerate(matrix.station_ids):
        rows_by_station[station].append(row)

    windows: List[SequenceWindow] = []
    for station, rows in rows_by_station.items():
        rows.sort(key=lambda row: matrix.dates[row])
        for previous, current in zip(rows, rows[1:]):
            if matrix.dates[previous] == matrix.dates[current]:
                raise AquaSeriesException(
                    AquaSeriesError(
                        error_code="DUPLICATE_OBSERVATION",
                        error_message=(
                            f"Station {station} has two records on "
                            f"{matrix.dates[current].isoformat()}."
                        ),
                        category=ErrorCategory.DATA,
                        details={"station_id": station},
                    )
                )
        first_end = 0 if pad else sequence_length - 1
        for end in range(first_end, len(rows)):
            if np.isnan(targets[rows[end]]):
                continue
            start = end - sequence_length + 1
            window_rows = [rows[max(position, 0)] for position in range(start, end + 1)]
            windows.append(
                SequenceWindow(
                    window=matrix.values[window_rows, :],
                    target=float(targets[rows[end]]),
                    station_id=station,
                    end_date=matrix.dates[rows[end]],
                    row=rows[end],
                )
            )

    windows.sort(key=lambda item: (item.end_date, item.station_id))
    logger.info(
        "Built %d windows of length %d from %d stations",
        len(windows),
        sequence_length,
        len(rows_by_station),
    )
    return SequenceSet(
        windows=tuple(windows),
        sequence_length=sequence_length,
        input_dim=len(matrix.names),
    )


def partition_by_year(
    sequences: SequenceSet, boundary_year: int
) -> Tuple[SequenceSet, SequenceSet]:
    """Split windows by the year of their final record (train < boundary_year <= validation).

    Validation windows may draw their earlier timesteps from training years; only targets
    decide the side.
    """
    train = [index for index, item in enumerate(sequences.windows) if item.end_date.year < boundary_year]
    validation = [
        index for index, item in enumerate(sequences.windows) if item.end_date.year >= boundary_year
    ]
    return sequences.subset(train), sequences.subset(validation)
