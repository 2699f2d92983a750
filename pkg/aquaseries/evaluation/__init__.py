from .schemas import EvalReport, FoldPlan, RankedFeature, SelectionConfig, SelectionResult
from .metrics import mae, pearson_r, r_squared, rmse, smape
from .folds import time_series_folds
from .selection import cross_validate, rank_features, select_features
from .report import (
    REPORT_CSV_COLUMNS,
    evaluate_predictions,
    read_report_json,
    reports_to_frame,
    reports_to_json,
    write_report_csv,
    write_report_json,
)

__all__ = [
    "EvalReport",
    "FoldPlan",
    "RankedFeature",
    "SelectionConfig",
    "SelectionResult",
    "REPORT_CSV_COLUMNS",
    "cross_validate",
    "evaluate_predictions",
    "mae",
    "pearson_r",
    "r_squared",
    "rank_features",
    "read_report_json",
    "reports_to_frame",
    "reports_to_json",
    "rmse",
    "select_features",
    "smape",
    "time_series_folds",
    "write_report_csv",
    "write_report_json",
]
