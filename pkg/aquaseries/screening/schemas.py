"""This module defines the schemas for quality screening and raster match-up extraction.

It includes fence results, screening and extraction policies, synthetic scene grids,
in-situ samples and the outcomes of point extraction and temporal matching.
"""

from datetime import date
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from aquaseries.spectra import BAND_ORDER, BandId, ParameterId, Spectrum

MNDWI_WATER_THRESHOLD = 0.0


class FenceResult(BaseModel):
    """Outcome of Tukey's fences over one variable.

    Attributes:
        kept (Tuple[int, ...]): Indices within [lower_fence, upper_fence].
        rejected (Tuple[int, ...]): Indices outside the fences.
        lower_fence (float): Q1 - k * IQR.
        upper_fence (float): Q3 + k * IQR.
        k (float): Fence multiplier.
    """

    kept: Tuple[int, ...]
    rejected: Tuple[int, ...]
    lower_fence: float
    upper_fence: float
    k: float

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_partition(self) -> "FenceResult":
        """Check that kept and rejected are disjoint and the fences are ordered."""
        if set(self.kept) & set(self.rejected):
            raise ValueError("kept and rejected must be disjoint")
        if self.lower_fence > self.upper_fence:
            raise ValueError("lower_fence must not exceed upper_fence")
        return self


class ScreenedVariable(str, Enum):
    """Variable Tukey's fences are applied to.

    TARGET: the modelled parameter's measured values
    REFLECTANCE: every band reflectance; a record is dropped if any band is outside its fence
    NONE: screening disabled
    """

    TARGET = "target"
    REFLECTANCE = "reflectance"
    NONE = "none"


class ScreeningPolicy(BaseModel):
    """How low-quality match-ups are screened.

    Attributes:
        k (float): Fence multiplier.
        variable (ScreenedVariable): Variable the fences are computed on.
        quantile_method (str): numpy quantile method used for Q1 and Q3.
    """

    k: float = Field(1.5, ge=0.0, description="Fence multiplier applied to the IQR.")
    variable: ScreenedVariable = Field(
        ScreenedVariable.TARGET, description="Variable the fences screen."
    )
    quantile_method: str = Field(
        "linear", description="Quantile interpolation between closest ranks."
    )

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={"example": {"k": 1.5, "variable": "target", "quantile_method": "linear"}},
    )


class ScreeningReport(BaseModel):
    """Counts produced by screening one parameter's training records."""

    parameter: ParameterId
    variable: ScreenedVariable
    k: float
    candidates: int = Field(..., description="Training records carrying the parameter.")
    rejected: int
    lower_fence: Optional[float] = None
    upper_fence: Optional[float] = None


class SceneGrid(BaseModel):
    """A synthetic reflectance scene on a local planar grid.

    Cell (row, col) has its center at
    (origin_x + (col + 0.5) * cell_size, origin_y + (row + 0.5) * cell_size).

    Attributes:
        scene_date (date): Acquisition date.
        bands (Dict[BandId, np.ndarray]): One 2-D reflectance grid per retained band.
        cell_size (float): Cell edge length in meters.
        origin (Tuple[float, float]): Planar (x, y) of the grid corner in meters.
        land_mask (np.ndarray): 2-D boolean grid, True on land.
    """

    scene_date: date
    bands: Dict[BandId, np.ndarray]
    cell_size: float = Field(..., gt=0.0)
    origin: Tuple[float, float] = (0.0, 0.0)
    land_mask: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    @model_validator(mode="after")
    def validate_grids(self) -> "SceneGrid":
        """Check that every band and the land mask share one 2-D shape."""
        missing = [band.value for band in BAND_ORDER if band not in self.bands]
        if missing:
            raise ValueError(f"scene is missing bands: {missing}")
        shape = self.land_mask.shape
        if len(shape) != 2:
            raise ValueError("land_mask must be 2-D")
        for band, grid in self.bands.items():
            if grid.shape != shape:
                raise ValueError(
                    f"band {band.value} has shape {grid.shape}, expected {shape}"
                )
        return self

    @property
    def shape(self) -> Tuple[int, int]:
        """(rows, cols) of the grid."""
        return self.land_mask.shape

    def cell_centers(self) -> Tuple[np.ndarray, np.ndarray]:
        """Return (x, y) center coordinate grids."""
        rows, cols = self.shape
        xs = self.origin[0] + (np.arange(cols) + 0.5) * self.cell_size
        ys = self.origin[1] + (np.arange(rows) + 0.5) * self.cell_size
        return np.meshgrid(xs, ys)

    def contains(self, point: Tuple[float, float]) -> bool:
        """Whether a planar point lies within the grid extent."""
        rows, cols = self.shape
        x, y = point
        return (
            self.origin[0] <= x <= self.origin[0] + cols * self.cell_size
            and self.origin[1] <= y <= self.origin[1] + rows * self.cell_size
        )


class RejectionReason(str, Enum):
    """Why a sampling point yielded no spectrum."""

    ADJACENCY = "adjacency"
    NO_WATER_PIXELS = "no-water-pixels"


class ExtractionResult(BaseModel):
    """Either a buffer-mean spectrum or the reason the point was rejected."""

    spectrum: Optional[Spectrum] = None
    rejection: Optional[RejectionReason] = None
    pixel_count: int = 0
    land_distance: Optional[float] = None

    @model_validator(mode="after")
    def validate_outcome(self) -> "ExtractionResult":
        """Exactly one of spectrum and rejection is set."""
        if (self.spectrum is None) == (self.rejection is None):
            raise ValueError("exactly one of spectrum and rejection must be set")
        return self

    @property
    def accepted(self) -> bool:
        """Whether a spectrum was extracted."""
        return self.spectrum is not None


class ExtractionConfig(BaseModel):
    """Geometry and timing rules for match-up extraction.

    Attributes:
        buffer_radius (float): Radius around the sampling point averaged, in meters.
        min_land_distance (float): Minimum distance from the nearest land cell, in meters.
        max_day_difference (int): Allowed |scene date - sample date| in days.
    """

    buffer_radius: float = Field(20.0, gt=0.0)
    min_land_distance: float = Field(200.0, ge=0.0)
    max_day_difference: int = Field(1, ge=0)

    model_config = ConfigDict(frozen=True)


class InSituSample(BaseModel):
    """A station measurement awaiting a satellite match.

    Attributes:
        station_id (str): Monitoring station identifier.
        sample_date (date): Sampling date.
        location (Tuple[float, float]): (longitude, latitude) in degrees.
        point (Tuple[float, float]): Planar (x, y) in the scenes' frame, in meters.
        targets (Dict[ParameterId, float]): Measured values.
    """

    station_id: str = Field(..., min_length=1)
    sample_date: date
    location: Tuple[float, float] = (0.0, 0.0)
    point: Tuple[float, float]
    targets: Dict[ParameterId, float]

    model_config = ConfigDict(frozen=True)


class TemporalMatch(BaseModel):
    """Samples paired to scene dates, plus samples left unmatched."""

    pairs: List[Tuple[InSituSample, date]]
    unmatched: List[InSituSample]
