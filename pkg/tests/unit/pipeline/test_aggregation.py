"""Unit tests for monthly aggregation and plot data."""

from datetime import date

import pytest
from pydantic import ValidationError

from aquaseries.pipeline import (
    PLOT_COLUMNS,
    DatedValue,
    MonthlyAggregate,
    aggregate_monthly,
    emit_plot_data,
    plot_data_frame,
)


@pytest.fixture
def measurements():
    """Two January samples and one March sample."""
    return [
        DatedValue(station_id="S1", value_date=date(2019, 1, 10), value=1.0),
        DatedValue(station_id="S2", value_date=date(2019, 1, 20), value=3.0),
        DatedValue(station_id="S1", value_date=date(2019, 3, 5), value=7.0),
    ]


@pytest.fixture
def estimates():
    """Two January images (one seen at two stations) and one February image."""
    return [
        DatedValue(station_id="S1", value_date=date(2019, 1, 10), value=4.0, image_id="A"),
        DatedValue(station_id="S2", value_date=date(2019, 1, 10), value=6.0, image_id="A"),
        DatedValue(station_id="S1", value_date=date(2019, 1, 25), value=8.0, image_id="B"),
        DatedValue(station_id="S1", value_date=date(2019, 2, 14), value=2.0),
    ]


def test_monthly_means(measurements, estimates):
    """Measurements average per month; estimates average per image first."""
    rows = aggregate_monthly(measurements, estimates)
    assert [(row.year, row.month) for row in rows] == [(2019, 1), (2019, 2), (2019, 3)]
    january = rows[0]
    assert january.station_mean == 2.0
    assert january.station_n == 2
    assert january.estimate_mean == 6.5
    assert january.estimate_n == 2


def test_months_are_the_union(measurements, estimates):
    """Months with only one series keep the other absent."""
    rows = aggregate_monthly(measurements, estimates)
    february, march = rows[1], rows[2]
    assert february.station_mean is None
    assert february.station_n == 0
    assert february.estimate_mean == 2.0
    assert march.estimate_mean is None
    assert march.station_mean == 7.0


def test_order_does_not_change_results(measurements, estimates):
    """Shuffled inputs give identical aggregates."""
    forward = aggregate_monthly(measurements, estimates)
    backward = aggregate_monthly(measurements[::-1], estimates[::-1])
    assert forward == backward


def test_images_default_to_dates():
    """Estimates without image ids group by date."""
    estimates = [
        DatedValue(station_id="S1", value_date=date(2019, 5, 1), value=1.0),
        DatedValue(station_id="S2", value_date=date(2019, 5, 1), value=3.0),
        DatedValue(station_id="S1", value_date=date(2019, 5, 11), value=10.0),
    ]
    (row,) = aggregate_monthly([], estimates)
    assert row.estimate_n == 2
    assert row.estimate_mean == 6.0


def test_aggregate_counts_must_match_means():
    """A mean without observations is inconsistent."""
    with pytest.raises(ValidationError):
        MonthlyAggregate(year=2019, month=1, station_mean=1.0, station_n=0)


def test_plot_frame_marks_splits(measurements, estimates):
    """Months from the boundary on are validation."""
    frame = plot_data_frame(aggregate_monthly(measurements, estimates), date(2019, 2, 1))
    assert tuple(frame.columns) == PLOT_COLUMNS
    assert list(frame["split"]) == ["train", "validation", "validation"]


def test_emit_plot_data(measurements, estimates, tmp_path):
    """Absent means are written as empty cells."""
    path = emit_plot_data(
        aggregate_monthly(measurements, estimates), date(2019, 2, 1), tmp_path / "plot.csv"
    )
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(PLOT_COLUMNS)
    assert lines[2] == "2019,2,,2.0,0,1,validation"
    assert len(lines) == 4
