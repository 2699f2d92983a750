"""End-to-end pipeline: ingest, screen, features, select, train, evaluate, report.

Every stage runs inside `_stage`, which tags failures with the stage name and leaves a
`.failed` marker in the output directory. Artifacts are only written after the last
computing stage succeeds, each through a temp-then-rename write.
"""

import json
import logging
from contextlib import contextmanager
from datetime import date
from pathlib import Path
from typing import Any, Dict, Iterator, List, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, ValidationError

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.evaluation import (
    EvalReport,
    SelectionResult,
    evaluate_predictions,
    reports_to_json,
    select_features,
    write_report_csv,
)
from aquaseries.features import (
    PUBLISHED_SELECTIONS,
    FeatureMatrix,
    enumerate_candidates,
    evaluate_features,
    parse_feature_list,
)
from aquaseries.model import ModelSnapshot, SequenceSet, fit_model, predict_snapshot, save_model
from aquaseries.screening import (
    MNDWI_WATER_THRESHOLD,
    ScreeningReport,
    build_matchup_table,
    load_scene_directory,
    read_insitu_samples,
    screen_table,
)
from aquaseries.spectra import (
    BAND_WAVELENGTHS_NM,
    MatchupTable,
    ParameterId,
    ingest_matchup_table,
    split_by_year,
)
from aquaseries.utils.files import atomic_write_text, sha256_file
from .aggregation import aggregate_monthly, emit_plot_data
from .schemas import DatedValue, RunConfig

logger = logging.getLogger(__name__)

FAILED_MARKER = ".failed"

ARTIFACTS = (
    "report.json",
    "report.csv",
    "selected_features.json",
    "loss_history.csv",
    "predictions.csv",
    "plot_data.csv",
    "model.lstm",
)


class PipelineResult(BaseModel):
    """Outcome of one run.

    Attributes:
        reports (Tuple[EvalReport, ...]): Train and validation reports.
        selected_features (Tuple[str, ...]): Model inputs.
        output_dir (Path): Directory holding the artifacts.
        config_digest (str): Digest of the run configuration.
    """

    reports: Tuple[EvalReport, ...]
    selected_features: Tuple[str, ...]
    output_dir: Path
    config_digest: str

    model_config = ConfigDict(frozen=True)

    @property
    def validation(self) -> EvalReport:
        """The validation-split report."""
        return next(report for report in self.reports if report.split == "validation")


@contextmanager
def _stage(name: str, output_dir: Path) -> Iterator[None]:
    logger.info("Stage %s started", name)
    try:
        yield
    except AquaSeriesException as e:
        error = e if e.stage else e.with_stage(name)
        _mark_failed(output_dir, error)
        raise error from e
    except ValidationError as e:
        error = AquaSeriesException(
            AquaSeriesError(
                error_code="VALIDATION_ERROR",
                error_message=str(e).splitlines()[0],
                category=ErrorCategory.DATA,
                stage=name,
            )
        )
        _mark_failed(output_dir, error)
        raise error from e
    except Exception as e:
        logger.exception("Stage %s failed unexpectedly", name)
        _mark_failed(
            output_dir,
            AquaSeriesException(
                AquaSeriesError(
                    error_code="UNEXPECTED_ERROR",
                    error_message=f"{type(e).__name__}: {e}",
                    category=ErrorCategory.DATA,
                    stage=name,
                )
            ),
        )
        raise
    logger.info("Stage %s finished", name)


def _mark_failed(output_dir: Path, error: AquaSeriesException) -> None:
    document = {"stage": error.stage, "error_code": error.error_code, "message": str(error)}
    atomic_write_text(output_dir / FAILED_MARKER, json.dumps(document, sort_keys=True) + "\n")


def design_defaults(config: RunConfig) -> Dict[str, Any]:
    """Method defaults in effect for a run, recorded in the manifest."""
    train_config = config.train
    return {
        "adam_beta1": train_config.beta1,
        "adam_beta2": train_config.beta2,
        "adam_epsilon": train_config.epsilon,
        "learning_rate": train_config.learning_rate,
        "learning_rate_decay": train_config.decay_rate,
        "learning_rate_schedule": "per-epoch exponential",
        "epochs": train_config.epochs,
        "batch_size": train_config.batch_size,
        "dropout_rate": train_config.dropout_rate,
        "dropout_placement": "final hidden state",
        "hidden_dim": train_config.hidden_dim,
        "forget_bias": train_config.forget_bias,
        "sequence_length": train_config.sequence_length,
        "pad_sequences": train_config.pad_sequences,
        "loss": "mean squared error",
        "normalization": "z-score, training windows, population std",
        "seed": config.seed,
        "negative_reflectance": config.ingest.model_dump(mode="json"),
        "tukey_k": config.screening.k,
        "screened_variable": config.screening.variable.value,
        "quartile_method": config.screening.quantile_method,
        "norm_ratio_pairs": "ordered",
        "consecutive_bands": "retained band order",
        "undefined_feature_value": 0.0,
        "band_wavelengths_nm": {band.value: nm for band, nm in BAND_WAVELENGTHS_NM.items()},
        "selection_ranking_split": "train",
        "selection_k_min": config.selection.k_min,
        "selection_k_max": config.selection.k_max,
        "selection_folds": config.selection.folds,
        "selection_epochs": config.selection.selection_epochs,
        "selection_k_tie_break": "smaller k",
        "smape_variant": "100*mean(2|e|/(|y|+|yhat|)), zero denominator -> 0",
        "estimate_aggregation": "per-image mean, then monthly mean",
        "plot_months": "union of measurement and estimate months",
        "mndwi_water_threshold": MNDWI_WATER_THRESHOLD,
        "buffer_radius_m": config.extraction.buffer_radius,
        "min_land_distance_m": config.extraction.min_land_distance,
        "max_day_difference": config.extraction.max_day_difference,
        "boundary_year": config.boundary_year,
    }


def _load_table(config: RunConfig) -> MatchupTable:
    if config.matchup_path is not None:
        return ingest_matchup_table(config.matchup_path, config.ingest)
    samples = read_insitu_samples(config.insitu_path)
    scenes = load_scene_directory(config.scene_dir)
    return build_matchup_table(samples, scenes, config.extraction)


def _feature_source(config: RunConfig) -> Tuple[str, List[str] | None]:
    if config.features:
        return "explicit", list(config.features)
    if config.selection.preset == "published":
        return "published", list(PUBLISHED_SELECTIONS[config.parameter])
    return "selection", None


def _selected_document(
    parameter: ParameterId, source: str, selected: Tuple[str, ...], result: SelectionResult | None
) -> str:
    document: Dict[str, Any] = {
        "parameter": parameter.value,
        "source": source,
        "selected": list(selected),
    }
    if result is not None:
        document.update(
            ranking=[item.model_dump() for item in result.ranking],
            scores={str(k): score for k, score in sorted(result.scores.items())},
            skipped_constant=list(result.skipped_constant),
            dropped_collinear=list(result.dropped_collinear),
        )
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def _predictions_frame(sets: Dict[str, Tuple[SequenceSet, np.ndarray]]) -> pd.DataFrame:
    rows = []
    for split, (sequences, estimates) in sets.items():
        for item, estimate in zip(sequences.windows, estimates):
            rows.append(
                {
                    "station_id": item.station_id,
                    "date": item.end_date.isoformat(),
                    "split": split,
                    "observed": item.target,
                    "estimated": float(estimate),
                }
            )
    return pd.DataFrame(
        rows, columns=["station_id", "date", "split", "observed", "estimated"]
    )


def run_pipeline(config: RunConfig) -> PipelineResult:
    """Run every stage for one parameter and write the run artifacts.

    Raises:
        AquaSeriesException: With the failing stage name; the output directory then
            holds a `.failed` marker instead of a manifest.
    """
    config.validate_paths()
    output_dir = config.output_dir
    output_dir.mkdir(parents=True, exist_ok=True)
    (output_dir / FAILED_MARKER).unlink(missing_ok=True)
    digest = config.digest()
    parameter = config.parameter
    logger.info("Run %s for %s into %s", digest[:12], parameter.value, output_dir)

    with _stage("ingest", output_dir):
        table = _load_table(config)

    with _stage("screen", output_dir):
        screened, screening_report = screen_table(
            table, parameter, config.screening, config.boundary_year
        )
        split_by_year(screened, config.boundary_year)

    source, literal = _feature_source(config)
    with _stage("features", output_dir):
        expressions = parse_feature_list(literal) if literal else enumerate_candidates()
        candidates = evaluate_features(screened, expressions)
        targets = screened.target_array(parameter)

    selection_result = None
    with _stage("select", output_dir):
        if literal:
            selected = candidates.names
        else:
            train_rows = [
                row for row, day in enumerate(candidates.dates) if day.year < config.boundary_year
            ]
            selection_result = select_features(
                candidates.take_rows(train_rows),
                targets[train_rows],
                config.selection,
                config.train,
            )
            selected = selection_result.selected
        matrix = candidates.select(selected)

    with _stage("train", output_dir):
        fitted = fit_model(matrix, targets, config.train, config.boundary_year)
        if not len(fitted.validation_set):
            raise AquaSeriesException(
                AquaSeriesError(
                    error_code="EMPTY_PARTITION",
                    error_message=(
                        f"No validation windows of length {config.train.sequence_length} "
                        f"from {config.boundary_year} on."
                    ),
                    category=ErrorCategory.DATA,
                    details={"side": "validation"},
                )
            )

    splits = {"train": fitted.train_set, "validation": fitted.validation_set}
    with _stage("evaluate", output_dir):
        estimates = {
            split: predict_snapshot(fitted.snapshot, subset) for split, subset in splits.items()
        }
        reports = tuple(
            evaluate_predictions(
                parameter,
                split,
                subset.targets(),
                estimates[split],
                config_digest=digest,
                selected_features=matrix.names,
            )
            for split, subset in splits.items()
        )

    with _stage("report", output_dir):
        predictions = _predictions_frame(
            {split: (subset, estimates[split]) for split, subset in splits.items()}
        )
        _write_artifacts(
            config,
            digest,
            reports,
            source,
            matrix,
            selection_result,
            fitted.result.loss_history,
            predictions,
            fitted.snapshot,
            screening_report,
            table,
        )

    for report in reports:
        logger.info(
            "%s %s: n=%d r=%s rmse=%.4f mae=%.4f smape=%.2f",
            parameter.value,
            report.split,
            report.n,
            "undefined" if report.r is None else f"{report.r:.4f}",
            report.rmse,
            report.mae,
            report.smape,
        )
    return PipelineResult(
        reports=reports,
        selected_features=matrix.names,
        output_dir=output_dir,
        config_digest=digest,
    )


def _write_artifacts(
    config: RunConfig,
    digest: str,
    reports: Tuple[EvalReport, ...],
    source: str,
    matrix: FeatureMatrix,
    selection_result: SelectionResult | None,
    loss_history: Tuple[float, ...],
    predictions: pd.DataFrame,
    snapshot: ModelSnapshot,
    screening_report: ScreeningReport,
    table: MatchupTable,
) -> None:
    output_dir = config.output_dir
    atomic_write_text(output_dir / "report.json", reports_to_json(reports))
    write_report_csv(reports, output_dir / "report.csv")
    atomic_write_text(
        output_dir / "selected_features.json",
        _selected_document(config.parameter, source, matrix.names, selection_result),
    )
    atomic_write_text(
        output_dir / "loss_history.csv",
        pd.DataFrame({"epoch": range(len(loss_history)), "loss": list(loss_history)}).to_csv(
            index=False, lineterminator="\n"
        ),
    )
    atomic_write_text(
        output_dir / "predictions.csv", predictions.to_csv(index=False, lineterminator="\n")
    )

    estimates = [
        DatedValue(
            station_id=row.station_id,
            value_date=date.fromisoformat(row.date),
            value=row.estimated,
        )
        for row in predictions.itertuples(index=False)
    ]
    measurements = [
        DatedValue(
            station_id=record.station_id,
            value_date=record.timestamp,
            value=record.target(config.parameter),
        )
        for record in table.records
        if record.target(config.parameter) is not None
    ]
    emit_plot_data(
        aggregate_monthly(measurements, estimates),
        date(config.boundary_year, 1, 1),
        output_dir / "plot_data.csv",
    )
    save_model(snapshot, output_dir / "model.lstm")

    manifest = {
        "config_digest": digest,
        "config": config.model_dump(mode="json"),
        "parameter": config.parameter.value,
        "feature_source": source,
        "selected_features": list(matrix.names),
        "undefined_feature_values": {
            name: matrix.undefined_counts.get(name, 0) for name in matrix.names
        },
        "input": table.provenance.model_dump(mode="json"),
        "screening": screening_report.model_dump(mode="json"),
        "defaults": design_defaults(config),
        "artifacts": {name: sha256_file(output_dir / name) for name in ARTIFACTS},
    }
    atomic_write_text(
        output_dir / "run_manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )


def run_all_parameters(config: RunConfig) -> List[PipelineResult]:
    """Run the pipeline for every parameter into per-parameter subdirectories."""
    return [run_pipeline(config.for_parameter(parameter)) for parameter in ParameterId]
