"""Monthly aggregation of measurements and estimates for time-series plots."""

from datetime import date
from pathlib import Path
from typing import List, Sequence

import pandas as pd

from aquaseries.utils.files import atomic_write_text
from .schemas import DatedValue, MonthlyAggregate

PLOT_COLUMNS = (
    "year",
    "month",
    "station_mean",
    "estimate_mean",
    "station_n",
    "estimate_n",
    "split",
)


def _frame(values: Sequence[DatedValue]) -> pd.DataFrame:
    frame = pd.DataFrame(
        {
            "year": [item.value_date.year for item in values],
            "month": [item.value_date.month for item in values],
            "image": [item.image_key for item in values],
            "value": [float(item.value) for item in values],
        },
        columns=["year", "month", "image", "value"],
    ).astype({"year": int, "month": int, "image": str, "value": float})
    # Sorted input makes floating-point sums independent of record order.
    return frame.sort_values(["year", "month", "image", "value"], kind="mergesort")


def aggregate_monthly(
    measurements: Sequence[DatedValue], estimates: Sequence[DatedValue]
) -> List[MonthlyAggregate]:
    """Monthly means of two independent series.

    Measurements are averaged over every sample in the month. Estimates are first
    averaged per image (over station locations), then the image means are averaged per
    month. One row per month present in either series, sorted by month.
    """
    measured = _frame(measurements).groupby(["year", "month"])["value"].agg(["mean", "count"])
    per_image = _frame(estimates).groupby(["year", "month", "image"])["value"].mean()
    estimated = (
        per_image.reset_index()
        .sort_values(["year", "month", "value"], kind="mergesort")
        .groupby(["year", "month"])["value"]
        .agg(["mean", "count"])
    )

    months = sorted(set(measured.index) | set(estimated.index))
    rows = []
    for year, month in months:
        station = measured.loc[(year, month)] if (year, month) in measured.index else None
        estimate = estimated.loc[(year, month)] if (year, month) in estimated.index else None
        rows.append(
            MonthlyAggregate(
                year=int(year),
                month=int(month),
                station_mean=float(station["mean"]) if station is not None else None,
                estimate_mean=float(estimate["mean"]) if estimate is not None else None,
                station_n=int(station["count"]) if station is not None else 0,
                estimate_n=int(estimate["count"]) if estimate is not None else 0,
            )
        )
    return rows


def plot_data_frame(aggregates: Sequence[MonthlyAggregate], boundary: date) -> pd.DataFrame:
    """Tabulate aggregates, tagging months before the boundary as train."""
    rows = [
        {
            "year": item.year,
            "month": item.month,
            "station_mean": item.station_mean,
            "estimate_mean": item.estimate_mean,
            "station_n": item.station_n,
            "estimate_n": item.estimate_n,
            "split": "train" if item.first_day < boundary else "validation",
        }
        for item in aggregates
    ]
    return pd.DataFrame(rows, columns=list(PLOT_COLUMNS))


def emit_plot_data(
    aggregates: Sequence[MonthlyAggregate], boundary: date, path: Path | str
) -> Path:
    """Write plot data as CSV; absent means are left empty."""
    text = plot_data_frame(aggregates, boundary).to_csv(
        index=False, lineterminator="\n", na_rep=""
    )
    return atomic_write_text(path, text)
