from .schemas import DatedValue, MonthlyAggregate, RunConfig
from .config import SEED_ENV_VAR, build_run_config, load_run_config
from .aggregation import PLOT_COLUMNS, aggregate_monthly, emit_plot_data, plot_data_frame
from .runner import (
    ARTIFACTS,
    FAILED_MARKER,
    PipelineResult,
    design_defaults,
    run_all_parameters,
    run_pipeline,
)

__all__ = [
    "ARTIFACTS",
    "FAILED_MARKER",
    "PLOT_COLUMNS",
    "SEED_ENV_VAR",
    "DatedValue",
    "MonthlyAggregate",
    "PipelineResult",
    "RunConfig",
    "aggregate_monthly",
    "build_run_config",
    "design_defaults",
    "emit_plot_data",
    "load_run_config",
    "plot_data_frame",
    "run_all_parameters",
    "run_pipeline",
]
