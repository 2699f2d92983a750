"""This module defines the run configuration and plot-data schemas of the pipeline.

It includes the RunConfig that drives an end-to-end run, the dated values fed to
monthly aggregation and the resulting MonthlyAggregate rows.
"""

import json
from datetime import date
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.evaluation import SelectionConfig
from aquaseries.model import TrainConfig
from aquaseries.screening import ExtractionConfig, ScreeningPolicy
from aquaseries.spectra import IngestPolicy, ParameterId
from aquaseries.utils.files import sha256_bytes


class RunConfig(BaseModel):
    """Configuration of one pipeline run.

    Attributes:
        matchup_path (Optional[Path]): Match-up CSV; when absent the table is extracted
            from `insitu_path` and `scene_dir`.
        insitu_path (Optional[Path]): In-situ sample CSV for extraction.
        scene_dir (Optional[Path]): Directory of `.sgrid` scenes for extraction.
        output_dir (Path): Directory receiving every artifact.
        parameter (ParameterId): Parameter to model.
        boundary_year (int): First validation year.
        features (Optional[List[str]]): Literal feature list; skips selection when given.
        seed (int): Seed for every random draw; overrides `train.seed`.
        ingest (IngestPolicy): Negative reflectance handling.
        screening (ScreeningPolicy): Tukey screening settings.
        selection (SelectionConfig): Feature selection bounds and budget.
        train (TrainConfig): Network and optimizer settings.
        extraction (ExtractionConfig): Point extraction and temporal matching settings.
    """

    matchup_path: Optional[Path] = Field(None, description="Match-up CSV path.")
    insitu_path: Optional[Path] = Field(None, description="In-situ sample CSV path.")
    scene_dir: Optional[Path] = Field(None, description="Directory of .sgrid scenes.")
    output_dir: Path = Field(..., description="Artifact directory.")
    parameter: ParameterId = Field(ParameterId.CHLA, description="Parameter to model.")
    boundary_year: int = Field(2020, description="Records from this year on validate.")
    features: Optional[List[str]] = Field(
        None, description="Literal feature names; disables selection."
    )
    seed: int = Field(42, description="Seed for initialization, shuffling and dropout.")
    ingest: IngestPolicy = Field(default_factory=IngestPolicy)
    screening: ScreeningPolicy = Field(default_factory=ScreeningPolicy)
    selection: SelectionConfig = Field(default_factory=SelectionConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    extraction: ExtractionConfig = Field(default_factory=ExtractionConfig)

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "matchup_path": "data/matchups.csv",
                "output_dir": "runs/chla",
                "parameter": "chla",
                "boundary_year": 2020,
                "seed": 42,
                "screening": {"k": 1.5, "variable": "target"},
                "selection": {"k_min": 4, "k_max": 12, "folds": 5},
                "train": {"learning_rate": 0.001, "decay_rate": 0.97, "epochs": 200},
            }
        },
    )

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate the data sources and carry the run seed into the training config."""
        if not isinstance(values, dict):
            return values
        cls._validate_sources(values)
        return cls._sync_seed(values)

    @classmethod
    def _validate_sources(cls, values) -> None:
        if values.get("matchup_path"):
            return
        if not (values.get("insitu_path") and values.get("scene_dir")):
            raise ValueError(
                "Either 'matchup_path' or both 'insitu_path' and 'scene_dir' must be provided"
            )

    @classmethod
    def _sync_seed(cls, values):
        train = values.get("train") or {}
        if "seed" not in values:
            seed = train.seed if isinstance(train, TrainConfig) else train.get("seed")
            return values if seed is None else {**values, "seed": seed}
        if isinstance(train, TrainConfig):
            train = train.model_copy(update={"seed": values["seed"]})
        else:
            train = {**train, "seed": values["seed"]}
        return {**values, "train": train}

    def canonical_json(self) -> str:
        """Canonical JSON form with sorted keys."""
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form."""
        return sha256_bytes(self.canonical_json().encode("utf-8"))

    def referenced_paths(self) -> List[Path]:
        """Input paths the run reads."""
        if self.matchup_path is not None:
            return [self.matchup_path]
        return [path for path in (self.insitu_path, self.scene_dir) if path is not None]

    def validate_paths(self) -> None:
        """Check that every input path exists.

        Raises:
            AquaSeriesException: A config error naming the first missing path.
        """
        for path in self.referenced_paths():
            if not path.exists():
                raise AquaSeriesException(
                    AquaSeriesError(
                        error_code="CONFIG_PATH_MISSING",
                        error_message=f"Configured path does not exist: {path}",
                        category=ErrorCategory.CONFIG,
                        stage="config",
                        details={"path": str(path)},
                    )
                )

    def for_parameter(self, parameter: ParameterId) -> "RunConfig":
        """Copy of this config for another parameter, writing into a per-parameter subdirectory."""
        return self.model_copy(
            update={"parameter": parameter, "output_dir": self.output_dir / parameter.value}
        )


class DatedValue(BaseModel):
    """A value observed or estimated at a station on a date.

    Attributes:
        station_id (str): Station the value belongs to.
        value_date (date): Sampling or image date.
        value (float): Value in parameter units.
        image_id (Optional[str]): Image an estimate was derived from; the date when absent.
    """

    station_id: str
    value_date: date
    value: float
    image_id: Optional[str] = None

    model_config = ConfigDict(frozen=True)

    @property
    def image_key(self) -> str:
        """Grouping key of the image the value came from."""
        return self.image_id or self.value_date.isoformat()


class MonthlyAggregate(BaseModel):
    """Monthly means of station measurements and model estimates.

    Attributes:
        year (int): Calendar year.
        month (int): Calendar month.
        station_mean (Optional[float]): Mean of all measurements in the month.
        estimate_mean (Optional[float]): Mean of the per-image estimate means.
        station_n (int): Measurements in the month.
        estimate_n (int): Images in the month.
    """

    year: int
    month: int = Field(..., ge=1, le=12)
    station_mean: Optional[float] = None
    estimate_mean: Optional[float] = None
    station_n: int = Field(0, ge=0)
    estimate_n: int = Field(0, ge=0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_counts(self) -> "MonthlyAggregate":
        """Means are present exactly when their counts are positive."""
        if (self.station_mean is None) != (self.station_n == 0):
            raise ValueError("station_mean must be present only when station_n > 0")
        if (self.estimate_mean is None) != (self.estimate_n == 0):
            raise ValueError("estimate_mean must be present only when estimate_n > 0")
        return self

    @property
    def first_day(self) -> date:
        """First day of the month."""
        return date(self.year, self.month, 1)
