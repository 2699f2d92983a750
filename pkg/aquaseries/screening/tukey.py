"""Tukey's fences and their application to match-up tables."""

import logging
from typing import Sequence, Tuple

import numpy as np

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.spectra import MatchupTable, ParameterId
from .schemas import FenceResult, ScreenedVariable, ScreeningPolicy, ScreeningReport

logger = logging.getLogger(__name__)


def tukey_fences(values: Sequence[float], k: float = 1.5, method: str = "linear") -> FenceResult:
    """Flag values outside [Q1 - k * IQR, Q3 + k * IQR].

    Quartiles use linear interpolation between closest ranks; values on a fence are kept.

    Args:
        values (Sequence[float]): At least 4 finite values.
        k (float): Fence multiplier, 1.5 for Tukey's classical rule.
        method (str): numpy quantile method.

    Returns:
        FenceResult: Kept and rejected indices with the fences used.

    Raises:
        AquaSeriesException: On fewer than 4 values or any non-finite value.
    """
    data = np.asarray(values, dtype=np.float64)
    if data.ndim != 1 or data.size < 4:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="TOO_FEW_VALUES",
                error_message=f"Tukey's fences need at least 4 values, got {data.size}.",
                category=ErrorCategory.DATA,
            )
        )
    if not np.isfinite(data).all():
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="NON_FINITE_VALUE",
                error_message="Tukey's fences need finite values.",
                category=ErrorCategory.DATA,
            )
        )
    if k < 0:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="INVALID_FENCE_MULTIPLIER",
                error_message=f"Fence multiplier must be >= 0, got {k}.",
                category=ErrorCategory.CONFIG,
            )
        )

    q1, q3 = np.quantile(data, [0.25, 0.75], method=method)
    iqr = q3 - q1
    # inf * 0 is NaN, and a zero IQR leaves the fences on the quartiles for any k.
    spread = k * iqr if iqr > 0 else 0.0
    lower, upper = float(q1 - spread), float(q3 + spread)
    inside = (data >= lower) & (data <= upper)
    return FenceResult(
        kept=tuple(int(index) for index in np.flatnonzero(inside)),
        rejected=tuple(int(index) for index in np.flatnonzero(~inside)),
        lower_fence=lower,
        upper_fence=upper,
        k=k,
    )


def screen_table(
    table: MatchupTable,
    parameter: ParameterId,
    policy: ScreeningPolicy,
    boundary_year: int,
) -> Tuple[MatchupTable, ScreeningReport]:
    """Screen one parameter's training-period records with Tukey's fences.

    Records without the parameter are dropped. Records dated from boundary_year on are
    never screened, so validation data cannot shape the fences.

    Returns:
        Tuple[MatchupTable, ScreeningReport]: The retained records and screening counts.
    """
    with_target = [record for record in table.records if record.target(parameter) is not None]
    training = [record for record in with_target if record.timestamp.year < boundary_year]
    rejected_ids = set()
    lower = upper = None

    if policy.variable == ScreenedVariable.TARGET and len(training) >= 4:
        result = tukey_fences(
            [record.target(parameter) for record in training], policy.k, policy.quantile_method
        )
        rejected_ids = {id(training[index]) for index in result.rejected}
        lower, upper = result.lower_fence, result.upper_fence
    elif policy.variable == ScreenedVariable.REFLECTANCE and len(training) >= 4:
        spectra = np.vstack([record.spectrum.as_array() for record in training])
        for band_index in range(spectra.shape[1]):
            result = tukey_fences(spectra[:, band_index], policy.k, policy.quantile_method)
            rejected_ids.update(id(training[index]) for index in result.rejected)
    elif policy.variable != ScreenedVariable.NONE:
        logger.warning(
            "Only %d %s training records; skipping Tukey screening", len(training), parameter.value
        )

    kept = [record for record in with_target if id(record) not in rejected_ids]
    report = ScreeningReport(
        parameter=parameter,
        variable=policy.variable,
        k=policy.k,
        candidates=len(training),
        rejected=len(rejected_ids),
        lower_fence=lower,
        upper_fence=upper,
    )
    logger.info(
        "Screened %s: %d of %d training records rejected (k=%s, variable=%s)",
        parameter.value,
        report.rejected,
        report.candidates,
        policy.k,
        policy.variable.value,
    )
    screened = MatchupTable.from_records(
        kept,
        source=table.provenance.source,
        digest=table.provenance.digest,
        partition=table.provenance.partition,
    )
    return screened, report
