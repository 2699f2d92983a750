"""Evaluation reports and their JSON/CSV export."""

import json
import logging
from pathlib import Path
from typing import Sequence

import pandas as pd

from aquaseries.errors import AquaSeriesException
from aquaseries.spectra import ParameterId
from aquaseries.utils.files import atomic_write_text
from .metrics import mae, pearson_r, r_squared, rmse, smape
from .schemas import EvalReport

logger = logging.getLogger(__name__)

REPORT_CSV_COLUMNS = ("parameter", "method", "n", "r", "rmse", "mae", "smape")


def _defined_or_none(metric, observed, estimated, label: str):
    try:
        return metric(observed, estimated)
    except AquaSeriesException as e:
        if e.error_code not in ("UNDEFINED_METRIC", "TOO_FEW_VALUES"):
            raise
        logger.warning("%s: %s", label, e.error.error_message)
        return None


def evaluate_predictions(
    parameter: ParameterId,
    split: str,
    observed: Sequence[float],
    estimated: Sequence[float],
    config_digest: str = "",
    selected_features: Sequence[str] = (),
    method: str = "LSTM",
) -> EvalReport:
    """Compute every metric for one split.

    r and R² are reported as None (and logged) when a series is constant or n is 1.
    """
    label = f"{parameter.value} {split}"
    return EvalReport(
        parameter=parameter,
        split=split,
        method=method,
        n=len(observed),
        r=_defined_or_none(pearson_r, observed, estimated, label),
        r2=_defined_or_none(r_squared, observed, estimated, label),
        rmse=rmse(observed, estimated),
        mae=mae(observed, estimated),
        smape=smape(observed, estimated),
        config_digest=config_digest,
        selected_features=tuple(selected_features),
    )


def reports_to_json(reports: Sequence[EvalReport]) -> str:
    """Canonical JSON document with one entry per report, keys sorted."""
    document = {"reports": [report.model_dump(mode="json") for report in reports]}
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def reports_to_frame(reports: Sequence[EvalReport]) -> pd.DataFrame:
    """Rows in `parameter,method,n,r,rmse,mae,smape` order."""
    rows = [
        {
            "parameter": report.parameter.value,
            "method": f"{report.method} ({report.split})",
            "n": report.n,
            "r": report.r,
            "rmse": report.rmse,
            "mae": report.mae,
            "smape": report.smape,
        }
        for report in reports
    ]
    return pd.DataFrame(rows, columns=list(REPORT_CSV_COLUMNS))


def write_report_json(reports: Sequence[EvalReport], path: Path | str) -> Path:
    """Write reports as JSON."""
    return atomic_write_text(path, reports_to_json(reports))


def write_report_csv(reports: Sequence[EvalReport], path: Path | str) -> Path:
    """Write reports as CSV; undefined r is left empty."""
    text = reports_to_frame(reports).to_csv(index=False, lineterminator="\n", na_rep="")
    return atomic_write_text(path, text)


def read_report_json(path: Path | str) -> list[EvalReport]:
    """Read reports written by write_report_json."""
    document = json.loads(Path(path).read_text(encoding="utf-8"))
    return [EvalReport(**item) for item in document["reports"]]
