"""Unit tests for ReportingService class."""

from datetime import date

import pytest

from aquaseries.services.reporting import ReportingService
from aquaseries.spectra import ParameterId


@pytest.fixture
def reporting_service():
    """Fixture to create a ReportingService."""
    return ReportingService()


@pytest.fixture
def report(reporting_service):
    """A validation report for SS."""
    return reporting_service.evaluate(
        "ss", "validation", [1.0, 2.0, 4.0], [1.5, 2.5, 3.0], "digest", ["B4"]
    )


def test_evaluate_builds_report(report):
    """Test that evaluate converts the parameter and fills the metrics."""
    assert report.parameter == ParameterId.SS
    assert report.n == 3
    assert report.rmse == pytest.approx(0.5**0.5)
    assert report.selected_features == ("B4",)


def test_write_and_read(reporting_service, report, tmp_path):
    """Test that write produces both files and read restores the reports."""
    json_path, csv_path = reporting_service.write([report], tmp_path)
    assert json_path.name == "report.json"
    assert csv_path.name == "report.csv"
    assert reporting_service.read(json_path) == [report]


def test_table_renders_csv(reporting_service, report):
    """Test that table renders the exported columns."""
    lines = reporting_service.table([report]).splitlines()
    assert lines[0] == "parameter,method,n,r,rmse,mae,smape"
    assert lines[1].startswith("ss,LSTM (validation),3,")


def test_monthly_and_plot_data(reporting_service, tmp_path):
    """Test that mappings aggregate per month and write plot data."""
    rows = reporting_service.monthly(
        [{"station_id": "S1", "value_date": date(2019, 12, 3), "value": 4.0}],
        [{"station_id": "S1", "value_date": date(2020, 1, 3), "value": 5.0, "image_id": "x"}],
    )
    assert [(row.year, row.month) for row in rows] == [(2019, 12), (2020, 1)]
    path = reporting_service.plot_data(rows, date(2020, 1, 1), tmp_path / "plot.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[1].endswith(",train")
    assert lines[2].endswith(",validation")
