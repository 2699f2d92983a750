"""Shared fixtures: match-up records and a synthetic six-year match-up CSV."""

from datetime import date

import numpy as np
import pandas as pd
import pytest

from aquaseries.pipeline import SEED_ENV_VAR
from aquaseries.spectra import (
    BAND_ORDER,
    MATCHUP_COLUMNS,
    MatchupRecord,
    ParameterId,
    Spectrum,
)

STATIONS = ("S1", "S2", "S3", "S4")


@pytest.fixture(autouse=True)
def no_seed_override(monkeypatch):
    """Keep a seed exported in the shell from leaking into config tests."""
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)


@pytest.fixture
def make_record():
    """Factory for match-up records with a flat or explicit spectrum."""

    def _make(
        station_id="S1",
        timestamp=date(2019, 1, 15),
        reflectance=0.02,
        targets=None,
        location=(114.2, 22.3),
    ):
        if isinstance(reflectance, (int, float)):
            reflectance = {band: float(reflectance) for band in BAND_ORDER}
        return MatchupRecord(
            station_id=station_id,
            timestamp=timestamp,
            location=location,
            spectrum=Spectrum(reflectance=reflectance),
            targets=targets if targets is not None else {ParameterId.CHLA: 5.0},
        )

    return _make


@pytest.fixture
def synthetic_frame():
    """Monthly samples at four stations from 2015 to 2020.

    chla is 10 + 20 * NR(B2,B3) plus small noise; ss follows B4 and turbidity B3.
    """
    rng = np.random.default_rng(7)
    rows = []
    for year in range(2015, 2021):
        for month in range(1, 13):
            for offset, station in enumerate(STATIONS):
                reflectance = np.round(rng.uniform(0.01, 0.1, size=len(BAND_ORDER)), 6)
                values = dict(zip((band.value for band in BAND_ORDER), reflectance))
                ratio = (values["B2"] - values["B3"]) / (values["B2"] + values["B3"])
                row = {
                    "station_id": station,
                    "date": date(year, month, 10 + offset).isoformat(),
                    "lon": 114.0 + 0.01 * offset,
                    "lat": 22.3,
                }
                row.update({name: float(value) for name, value in values.items()})
                row["chla"] = round(10.0 + 20.0 * ratio + rng.normal(0.0, 0.1), 6)
                row["ss"] = round(5.0 + 100.0 * values["B4"] + rng.normal(0.0, 0.05), 6)
                row["turbidity"] = round(2.0 + 50.0 * values["B3"] + rng.normal(0.0, 0.05), 6)
                rows.append(row)
    return pd.DataFrame(rows, columns=list(MATCHUP_COLUMNS))


@pytest.fixture
def matchup_csv(tmp_path, synthetic_frame):
    """The synthetic frame written as a match-up CSV."""
    path = tmp_path / "matchups.csv"
    synthetic_frame.to_csv(path, index=False, lineterminator="\n")
    return path


@pytest.fixture
def quick_config(matchup_csv, tmp_path):
    """A RunConfig document sized for fast end-to-end runs."""
    return {
        "matchup_path": str(matchup_csv),
        "output_dir": str(tmp_path / "run"),
        "parameter": "chla",
        "boundary_year": 2020,
        "seed": 11,
        "selection": {"k_min": 1, "k_max": 3, "folds": 3, "selection_epochs": 8},
        "train": {
            "learning_rate": 0.01,
            "decay_rate": 0.99,
            "epochs": 80,
            "batch_size": 16,
            "sequence_length": 2,
            "dropout_rate": 0.0,
            "hidden_dim": 8,
        },
    }
