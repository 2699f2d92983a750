"""This module defines the feature expression variants and the evaluated feature matrix.

Feature names follow the notation `B2`, `(B2)^2`, `NR(B2,B3)`, `TB(B2,B3,B4)` and
`LH(B1,B2,B3)`. Each expression evaluates column-wise over an (n, 10) reflectance
matrix laid out in band order.
"""

from datetime import date
from typing import Annotated, Dict, Literal, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from aquaseries.spectra import BandId
from .formulas import line_height, norm_ratio, three_band


def _consecutive(bands: Tuple[BandId, BandId, BandId]) -> bool:
    first = bands[0].position
    return [band.position for band in bands] == [first, first + 1, first + 2]


class BandFeature(BaseModel):
    """A raw band reflectance."""

    kind: Literal["band"] = "band"
    band: BandId

    model_config = ConfigDict(frozen=True)

    @property
    def name(self) -> str:
        """Canonical name."""
        return self.band.value

    def evaluate(self, reflectance: np.ndarray) -> np.ndarray:
        """Evaluate over an (n, 10) reflectance matrix."""
        return reflectance[:, self.band.position].copy()


class PowerFeature(BaseModel):
    """A band reflectance raised to the second or third power."""

    kind: Literal["power"] = "power"
    band: BandId
    exponent: Literal[2, 3]

    model_config = ConfigDict(frozen=True)

    @property
    def name(self) -> str:
        """Canonical name."""
        return f"({self.band.value})^{self.exponent}"

    def evaluate(self, reflectance: np.ndarray) -> np.ndarray:
        """Evaluate over an (n, 10) reflectance matrix."""
        return reflectance[:, self.band.position] ** self.exponent


class NormRatioFeature(BaseModel):
    """Normalized ratio of two distinct bands."""

    kind: Literal["norm_ratio"] = "norm_ratio"
    first: BandId
    second: BandId

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_distinct(self) -> "NormRatioFeature":
        """Reject a ratio of a band with itself."""
        if self.first == self.second:
            raise ValueError(f"NR needs two distinct bands, got {self.first.value} twice")
        return self

    @property
    def name(self) -> str:
        """Canonical name."""
        return f"NR({self.first.value},{self.second.value})"

    def evaluate(self, reflectance: np.ndarray) -> np.ndarray:
        """Evaluate over an (n, 10) reflectance matrix; NaN where undefined."""
        return norm_ratio(
            reflectance[:, self.first.position], reflectance[:, self.second.position]
        )


class _TripleFeature(BaseModel):
    bands: Tuple[BandId, BandId, BandId]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_consecutive(self):
        """Require three consecutive retained bands."""
        if not _consecutive(self.bands):
            raise ValueError(
                "bands must be three consecutive retained bands, got "
                + ",".join(band.value for band in self.bands)
            )
        return self

    def _columns(self, reflectance: np.ndarray):
        return tuple(reflectance[:, band.position] for band in self.bands)


class ThreeBandFeature(_TripleFeature):
    """Three-band ratio over consecutive bands."""

    kind: Literal["three_band"] = "three_band"

    @property
    def name(self) -> str:
        """Canonical name."""
        return "TB(" + ",".join(band.value for band in self.bands) + ")"

    def evaluate(self, reflectance: np.ndarray) -> np.ndarray:
        """Evaluate over an (n, 10) reflectance matrix; NaN where undefined."""
        return three_band(*self._columns(reflectance))


class LineHeightFeature(_TripleFeature):
    """Line height of the middle band over consecutive bands."""

    kind: Literal["line_height"] = "line_height"

    @property
    def name(self) -> str:
        """Canonical name."""
        return "LH(" + ",".join(band.value for band in self.bands) + ")"

    def evaluate(self, reflectance: np.ndarray) -> np.ndarray:
        """Evaluate over an (n, 10) reflectance matrix."""
        wavelengths = [band.central_wavelength for band in self.bands]
        return line_height(*self._columns(reflectance), *wavelengths)


FeatureExpr = Annotated[
    Union[BandFeature, PowerFeature, NormRatioFeature, ThreeBandFeature, LineHeightFeature],
    Field(discriminator="kind"),
]


class FeatureMatrix(BaseModel):
    """Evaluated predictors, one row per match-up record and one column per feature.

    Attributes:
        names (Tuple[str, ...]): Canonical feature names in column order.
        values (np.ndarray): (n_records, n_features) float64 matrix of finite values.
        station_ids (Tuple[str, ...]): Station of each row.
        dates (Tuple[date, ...]): Sampling date of each row.
        undefined_counts (Dict[str, int]): Per feature, undefined values replaced by 0.
    """

    names: Tuple[str, ...]
    values: np.ndarray
    station_ids: Tuple[str, ...]
    dates: Tuple[date, ...]
    undefined_counts: Dict[str, int] = Field(default_factory=dict)

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def validate_shape(self) -> "FeatureMatrix":
        """Check the matrix shape against names and row metadata, and that every value is finite."""
        rows = len(self.station_ids)
        if self.values.shape != (rows, len(self.names)):
            raise ValueError(
                f"values shape {self.values.shape} does not match "
                f"{rows} rows x {len(self.names)} features"
            )
        if len(self.dates) != rows:
            raise ValueError("dates must align with station_ids")
        if not np.isfinite(self.values).all():
            raise ValueError("feature matrix must hold finite values only")
        return self

    def __len__(self) -> int:
        return len(self.station_ids)

    def column(self, name: str) -> np.ndarray:
        """Return one feature column."""
        return self.values[:, self.names.index(name)]

    def select(self, names) -> "FeatureMatrix":
        """Return a matrix restricted to the given feature columns, in the given order."""
        names = tuple(names)
        indices = [self.names.index(name) for name in names]
        return FeatureMatrix(
            names=names,
            values=self.values[:, indices],
            station_ids=self.station_ids,
            dates=self.dates,
            undefined_counts={
                name: self.undefined_counts.get(name, 0) for name in names
            },
        )

    def take_rows(self, rows) -> "FeatureMatrix":
        """Return a matrix with only the given row indices, in the given order."""
        rows = list(rows)
        return FeatureMatrix(
            names=self.names,
            values=self.values[rows, :],
            station_ids=tuple(self.station_ids[row] for row in rows),
            dates=tuple(self.dates[row] for row in rows),
            undefined_counts=dict(self.undefined_counts),
        )

    def to_frame(self) -> pd.DataFrame:
        """Return the export layout: `station_id,date` followed by one column per feature."""
        frame = pd.DataFrame(self.values, columns=list(self.names))
        frame.insert(0, "date", [day.isoformat() for day in self.dates])
        frame.insert(0, "station_id", list(self.station_ids))
        return frame
