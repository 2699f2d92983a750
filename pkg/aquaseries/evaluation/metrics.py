"""Accuracy metrics: r, R², RMSE, MAE and SMAPE."""

from typing import Sequence, Tuple

import numpy as np
from sklearn.metrics import mean_absolute_error, mean_squared_error, r2_score

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory


def _pair(y: Sequence[float], yhat: Sequence[float], minimum: int) -> Tuple[np.ndarray, np.ndarray]:
    observed = np.asarray(y, dtype=np.float64).ravel()
    estimated = np.asarray(yhat, dtype=np.float64).ravel()
    if observed.shape != estimated.shape:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="DIMENSION_MISMATCH",
                error_message=f"{observed.size} observations but {estimated.size} estimates.",
                category=ErrorCategory.DATA,
            )
        )
    if observed.size < minimum:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="EMPTY_INPUT" if observed.size == 0 else "TOO_FEW_VALUES",
                error_message=f"Metric needs at least {minimum} pairs, got {observed.size}.",
                category=ErrorCategory.DATA,
            )
        )
    return observed, estimated


def _undefined(metric: str, reason: str) -> AquaSeriesException:
    return AquaSeriesException(
        AquaSeriesError(
            error_code="UNDEFINED_METRIC",
            error_message=f"{metric} is undefined: {reason}.",
            category=ErrorCategory.DATA,
            details={"metric": metric},
        )
    )


def pearson_r(y: Sequence[float], yhat: Sequence[float]) -> float:
    """Sample Pearson correlation coefficient.

    Raises:
        AquaSeriesException: With UNDEFINED_METRIC when either series is constant.
    """
    observed, estimated = _pair(y, yhat, 2)
    dy = observed - observed.mean()
    dyhat = estimated - estimated.mean()
    denominator = np.sqrt((dy @ dy) * (dyhat @ dyhat))
    if denominator == 0.0:
        raise _undefined("r", "zero variance")
    return float(np.clip((dy @ dyhat) / denominator, -1.0, 1.0))


def r_squared(y: Sequence[float], yhat: Sequence[float]) -> float:
    """Coefficient of determination 1 - SS_res / SS_tot; may be negative."""
    observed, estimated = _pair(y, yhat, 2)
    if np.all(observed == observed[0]):
        raise _undefined("R2", "observations have zero variance")
    return float(r2_score(observed, estimated))


def rmse(y: Sequence[float], yhat: Sequence[float]) -> float:
    """Root mean squared error."""
    observed, estimated = _pair(y, yhat, 1)
    return float(np.sqrt(mean_squared_error(observed, estimated)))


def mae(y: Sequence[float], yhat: Sequence[float]) -> float:
    """Mean absolute error."""
    observed, estimated = _pair(y, yhat, 1)
    return float(mean_absolute_error(observed, estimated))


def smape(y: Sequence[float], yhat: Sequence[float]) -> float:
    """Symmetric MAPE in percent, 100 * mean(2|yhat - y| / (|y| + |yhat|)).

    Pairs with a zero denominator contribute 0, so the result lies in [0, 200].
    """
    observed, estimated = _pair(y, yhat, 1)
    denominator = np.abs(observed) + np.abs(estimated)
    numerator = 2.0 * np.abs(estimated - observed)
    safe = np.where(denominator == 0.0, 1.0, denominator)
    terms = np.where(denominator == 0.0, 0.0, numerator / safe)
    return float(100.0 * terms.mean())
