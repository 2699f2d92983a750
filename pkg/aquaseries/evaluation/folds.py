"""Forward-chaining cross-validation folds."""

import numpy as np
from sklearn.model_selection import TimeSeriesSplit

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from .schemas import FoldPlan


def time_series_folds(n: int, folds: int = 5) -> FoldPlan:
    """Split n chronologically sorted items into forward-chaining folds.

    The test blocks are the last `folds` of `folds + 1` near-equal contiguous chunks;
    each fold trains on everything before its test block.

    Raises:
        AquaSeriesException: If n < folds + 1 or folds < 2.
    """
    if folds < 2:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="INVALID_FOLD_COUNT",
                error_message=f"At least 2 folds are required, got {folds}.",
                category=ErrorCategory.CONFIG,
            )
        )
    if n < folds + 1:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="TOO_FEW_SEQUENCES",
                error_message=f"{folds} folds need at least {folds + 1} sequences, got {n}.",
                category=ErrorCategory.DATA,
                details={"n": n, "folds": folds},
            )
        )
    splitter = TimeSeriesSplit(n_splits=folds)
    plan = tuple(
        (tuple(int(i) for i in train), tuple(int(i) for i in test))
        for train, test in splitter.split(np.arange(n))
    )
    return FoldPlan(n=n, folds=plan)
