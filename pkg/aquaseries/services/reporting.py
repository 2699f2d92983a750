"""Facade for evaluation reports and plot data."""

from datetime import date
from pathlib import Path
from typing import Iterable, List, Mapping, Sequence, Tuple

from aquaseries.evaluation import (
    EvalReport,
    evaluate_predictions,
    read_report_json,
    reports_to_frame,
    write_report_csv,
    write_report_json,
)
from aquaseries.pipeline import DatedValue, MonthlyAggregate, aggregate_monthly, emit_plot_data
from aquaseries.spectra import ParameterId


class ReportingService:
    """Facade for turning predictions into reports and plot tables."""

    def evaluate(
        self,
        parameter: str,
        split: str,
        observed: Sequence[float],
        estimated: Sequence[float],
        config_digest: str = "",
        selected_features: Sequence[str] = (),
    ) -> EvalReport:
        """Compute r, R², RMSE, MAE and SMAPE for one split.

        Args:
            parameter: Parameter value such as "chla".
            split: "train" or "validation".
            observed: Measured values.
            estimated: Model estimates.
            config_digest: Digest of the producing run.
            selected_features: Model inputs.

        Returns:
            EvalReport: The metrics.
        """
        return evaluate_predictions(
            ParameterId(parameter),
            split,
            observed,
            estimated,
            config_digest=config_digest,
            selected_features=selected_features,
        )

    def write(self, reports: Sequence[EvalReport], output_dir: Path | str) -> Tuple[Path, Path]:
        """Write `report.json` and `report.csv` into a directory."""
        directory = Path(output_dir)
        return (
            write_report_json(reports, directory / "report.json"),
            write_report_csv(reports, directory / "report.csv"),
        )

    def read(self, path: Path | str) -> List[EvalReport]:
        """Read a `report.json` document."""
        return read_report_json(path)

    def table(self, reports: Sequence[EvalReport]) -> str:
        """Render reports as CSV text in the exported column order."""
        return reports_to_frame(reports).to_csv(index=False, lineterminator="\n", na_rep="")

    def monthly(
        self,
        measurements: Iterable[Mapping],
        estimates: Iterable[Mapping],
    ) -> List[MonthlyAggregate]:
        """Aggregate measurement and estimate records per month.

        Args:
            measurements: Mappings with station_id, value_date and value.
            estimates: Mappings with station_id, value_date, value and optional image_id.

        Returns:
            List[MonthlyAggregate]: One row per month, sorted.
        """
        return aggregate_monthly(
            [DatedValue(**item) for item in measurements],
            [DatedValue(**item) for item in estimates],
        )

    def plot_data(
        self, aggregates: Sequence[MonthlyAggregate], boundary: date, path: Path | str
    ) -> Path:
        """Write aggregates as plot data tagged train/validation at the boundary date."""
        return emit_plot_data(aggregates, boundary, path)
