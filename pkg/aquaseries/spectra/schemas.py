"""This module defines the band metadata and match-up schemas for Sentinel-2 observations.

It includes the retained band enumeration with central wavelengths, the water quality
parameters, reflectance spectra, station match-up records and the ordered match-up table.
"""

import math
from datetime import date
from enum import Enum
from types import MappingProxyType
from typing import Dict, Mapping, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from aquaseries.utils.files import sha256_bytes


class BandId(str, Enum):
    """The 10 Sentinel-2 bands retained after preprocessing.

    Bands 8 (NIR), 9 (water vapour) and 10 (cirrus) carry no usable water surface
    information and are not representable. Member order is the band order used by
    every "consecutive bands" rule.
    """

    B1 = "B1"
    B2 = "B2"
    B3 = "B3"
    B4 = "B4"
    B5 = "B5"
    B6 = "B6"
    B7 = "B7"
    B8A = "B8A"
    B11 = "B11"
    B12 = "B12"

    @property
    def central_wavelength(self) -> float:
        """Nominal central wavelength in nanometers."""
        return BAND_WAVELENGTHS_NM[self]

    @property
    def position(self) -> int:
        """Index of the band in the retained band order."""
        return BAND_ORDER.index(self)


BAND_ORDER: Tuple[BandId, ...] = tuple(BandId)

BAND_WAVELENGTHS_NM: Mapping[BandId, float] = MappingProxyType(
    {
        BandId.B1: 443.0,
        BandId.B2: 490.0,
        BandId.B3: 560.0,
        BandId.B4: 665.0,
        BandId.B5: 705.0,
        BandId.B6: 740.0,
        BandId.B7: 783.0,
        BandId.B8A: 865.0,
        BandId.B11: 1610.0,
        BandId.B12: 2190.0,
    }
)

EXCLUDED_BANDS: Tuple[str, ...] = ("B8", "B9", "B10")


class ParameterId(str, Enum):
    """Water quality parameters predicted from reflectance.

    CHLA: chlorophyll-a concentration in µg/L
    SS: suspended solids in mg/L
    TURBIDITY: turbidity in NTU
    """

    CHLA = "chla"
    SS = "ss"
    TURBIDITY = "turbidity"

    @property
    def unit(self) -> str:
        """Measurement unit of the parameter."""
        return PARAMETER_UNITS[self]

    @property
    def label(self) -> str:
        """Display label used in reports."""
        return PARAMETER_LABELS[self]


PARAMETER_UNITS: Mapping[ParameterId, str] = MappingProxyType(
    {ParameterId.CHLA: "ug/L", ParameterId.SS: "mg/L", ParameterId.TURBIDITY: "NTU"}
)

PARAMETER_LABELS: Mapping[ParameterId, str] = MappingProxyType(
    {ParameterId.CHLA: "Chl-a", ParameterId.SS: "SS", ParameterId.TURBIDITY: "Turbidity"}
)

MATCHUP_COLUMNS: Tuple[str, ...] = (
    "station_id",
    "date",
    "lon",
    "lat",
    *(band.value for band in BAND_ORDER),
    *(parameter.value for parameter in ParameterId),
)


class IngestPolicy(BaseModel):
    """Policy for negative reflectances produced by atmospheric correction.

    Attributes:
        allow_negative (bool): Keep every finite negative value untouched.
        negative_floor (float): Values below this floor reject the row.
        clamp_negatives (bool): Clamp values in [negative_floor, 0) to 0 instead of rejecting.
    """

    allow_negative: bool = Field(
        False, description="Keep finite negative reflectances as they are."
    )
    negative_floor: float = Field(
        -0.01, le=0.0, description="Reflectances below this value reject the row."
    )
    clamp_negatives: bool = Field(
        True, description="Clamp small negatives (floor <= value < 0) to zero."
    )

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "allow_negative": False,
                "negative_floor": -0.01,
                "clamp_negatives": True,
            }
        },
    )


class Spectrum(BaseModel):
    """Surface reflectance of one observation across the 10 retained bands.

    Attributes:
        reflectance (Dict[BandId, float]): Dimensionless reflectance per band.
    """

    reflectance: Dict[BandId, float] = Field(
        ..., description="Dimensionless surface reflectance per retained band."
    )

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate that all bands are present and finite."""
        cls._validate_bands(values)
        return values

    @classmethod
    def _validate_bands(cls, values):
        reflectance = values.get("reflectance") if isinstance(values, dict) else None
        if not isinstance(reflectance, dict):
            raise ValueError("reflectance must be a mapping of band to value")
        keys = {BandId(key) if not isinstance(key, BandId) else key for key in reflectance}
        missing = [band.value for band in BAND_ORDER if band not in keys]
        if missing:
            raise ValueError(f"reflectance is missing bands: {missing}")
        for key, value in reflectance.items():
            if not math.isfinite(float(value)):
                raise ValueError(f"reflectance of {key} must be finite, got {value}")

    def value(self, band: BandId) -> float:
        """Return the reflectance of one band."""
        return self.reflectance[band]

    def as_array(self) -> np.ndarray:
        """Return reflectances as a float64 vector in band order."""
        return np.array([self.reflectance[band] for band in BAND_ORDER], dtype=np.float64)


class MatchupRecord(BaseModel):
    """A station sample paired with the reflectance extracted at its location.

    Attributes:
        station_id (str): Monitoring station identifier.
        timestamp (date): Sampling date.
        location (Tuple[float, float]): Longitude and latitude in degrees.
        spectrum (Spectrum): Reflectance at the station.
        targets (Dict[ParameterId, float]): Measured parameter values (at least one).
    """

    station_id: str = Field(..., min_length=1, description="Monitoring station identifier.")
    timestamp: date = Field(..., description="Sampling date (ISO-8601).")
    location: Tuple[float, float] = Field(
        ..., description="(longitude, latitude) in degrees."
    )
    spectrum: Spectrum = Field(..., description="Reflectance at the sampling point.")
    targets: Dict[ParameterId, float] = Field(
        ..., description="Measured water quality values, keyed by parameter."
    )

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate the record targets."""
        cls._validate_targets(values)
        return values

    @classmethod
    def _validate_targets(cls, values):
        targets = values.get("targets") if isinstance(values, dict) else None
        if not targets:
            raise ValueError("at least one target value must be present")
        for key, value in targets.items():
            if value is None or not math.isfinite(float(value)):
                raise ValueError(f"target {key} must be finite, got {value}")

    def target(self, parameter: ParameterId) -> Optional[float]:
        """Return the measured value of a parameter, or None when it was not sampled."""
        return self.targets.get(parameter)


class Provenance(BaseModel):
    """Where a match-up table came from.

    Attributes:
        source (str): Source file path or producing stage.
        digest (str): SHA-256 of the source file bytes.
        row_count (int): Number of records in the table.
        partition (Optional[str]): Split name when the table is one side of a split.
    """

    source: str = Field(..., description="Source file path or producing stage.")
    digest: str = Field(..., description="SHA-256 of the source bytes.")
    row_count: int = Field(..., ge=0, description="Number of records.")
    partition: Optional[str] = Field(None, description="Split side, if any.")

    model_config = ConfigDict(frozen=True)


def _record_sort_key(record: MatchupRecord) -> Tuple[date, str]:
    return (record.timestamp, record.station_id)


class MatchupTable(BaseModel):
    """Match-up records sorted by date, ties broken by station identifier.

    Attributes:
        records (Tuple[MatchupRecord, ...]): Ordered records.
        provenance (Provenance): Source digest and row count.
    """

    records: Tuple[MatchupRecord, ...] = Field(..., description="Records in date order.")
    provenance: Provenance = Field(..., description="Source digest and row count.")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_order(self) -> "MatchupTable":
        """Check the ascending (date, station_id) ordering."""
        keys = [_record_sort_key(record) for record in self.records]
        if any(later < earlier for earlier, later in zip(keys, keys[1:])):
            raise ValueError("records must be sorted by (timestamp, station_id)")
        return self

    @classmethod
    def from_records(
        cls,
        records,
        source: str,
        digest: str,
        partition: Optional[str] = None,
    ) -> "MatchupTable":
        """Build a table from unsorted records, sorting them first."""
        ordered = tuple(sorted(records, key=_record_sort_key))
        return cls(
            records=ordered,
            provenance=Provenance(
                source=source, digest=digest, row_count=len(ordered), partition=partition
            ),
        )

    def __len__(self) -> int:
        return len(self.records)

    def years(self) -> Tuple[int, int]:
        """Return the (first, last) calendar year covered by the table."""
        if not self.records:
            raise ValueError("table is empty")
        return self.records[0].timestamp.year, self.records[-1].timestamp.year

    def reflectance_matrix(self) -> np.ndarray:
        """Return an (n_records, 10) reflectance matrix in band order."""
        if not self.records:
            return np.empty((0, len(BAND_ORDER)), dtype=np.float64)
        return np.vstack([record.spectrum.as_array() for record in self.records])

    def target_array(self, parameter: ParameterId) -> np.ndarray:
        """Return the parameter values per record, NaN where not sampled."""
        return np.array(
            [
                np.nan if record.target(parameter) is None else record.target(parameter)
                for record in self.records
            ],
            dtype=np.float64,
        )

    def to_frame(self) -> pd.DataFrame:
        """Return the table in the match-up CSV column layout."""
        rows = []
        for record in self.records:
            row = {
                "station_id": record.station_id,
                "date": record.timestamp.isoformat(),
                "lon": record.location[0],
                "lat": record.location[1],
            }
            row.update({band.value: record.spectrum.value(band) for band in BAND_ORDER})
            row.update(
                {
                    parameter.value: record.target(parameter)
                    for parameter in ParameterId
                }
            )
            rows.append(row)
        return pd.DataFrame(rows, columns=list(MATCHUP_COLUMNS))

    def to_csv_text(self) -> str:
        """Return the canonical CSV serialization of the table."""
        return self.to_frame().to_csv(index=False, lineterminator="\n", na_rep="")

    def digest(self) -> str:
        """Return the SHA-256 of the canonical CSV serialization."""
        return sha256_bytes(self.to_csv_text().encode("utf-8"))
