"""Facade for match-up ingestion, extraction and screening."""

from pathlib import Path
from typing import Tuple

from aquaseries.screening import (
    ExtractionConfig,
    ScreeningPolicy,
    ScreeningReport,
    build_matchup_table,
    load_scene_directory,
    read_insitu_samples,
    screen_table,
)
from aquaseries.spectra import (
    IngestPolicy,
    MatchupTable,
    ParameterId,
    ingest_matchup_table,
    serialize_matchup_table,
    split_by_year,
)


class MatchupService:
    """Facade for building and cleaning match-up tables."""

    def __init__(self, boundary_year: int = 2020) -> None:
        """Initialize the match-up service."""
        self.boundary_year = boundary_year

    def ingest(
        self,
        path: Path | str,
        allow_negative: bool = False,
        negative_floor: float = -0.01,
        clamp_negatives: bool = True,
    ) -> MatchupTable:
        """Read and validate a match-up CSV.

        Args:
            path: Match-up CSV file.
            allow_negative: Keep negative reflectances as they are.
            negative_floor: Reflectances below this are rejected.
            clamp_negatives: Set reflectances between the floor and 0 to 0.

        Returns:
            MatchupTable: Sorted, validated table.
        """
        policy = IngestPolicy(
            allow_negative=allow_negative,
            negative_floor=negative_floor,
            clamp_negatives=clamp_negatives,
        )
        return ingest_matchup_table(path, policy)

    def extract(
        self,
        insitu_path: Path | str,
        scene_dir: Path | str,
        buffer_radius: float = 20.0,
        min_land_distance: float = 200.0,
        max_day_difference: int = 1,
    ) -> MatchupTable:
        """Build a match-up table from in-situ samples and a directory of scenes.

        Args:
            insitu_path: In-situ sample CSV.
            scene_dir: Directory of `.sgrid` scenes.
            buffer_radius: Averaging radius in meters.
            min_land_distance: Minimum distance to land in meters.
            max_day_difference: Largest sample-to-scene gap in days.

        Returns:
            MatchupTable: Records for every accepted sample.
        """
        config = ExtractionConfig(
            buffer_radius=buffer_radius,
            min_land_distance=min_land_distance,
            max_day_difference=max_day_difference,
        )
        return build_matchup_table(
            read_insitu_samples(insitu_path), load_scene_directory(scene_dir), config
        )

    def screen(
        self,
        table: MatchupTable,
        parameter: str,
        k: float = 1.5,
        variable: str = "target",
        **kwargs,
    ) -> Tuple[MatchupTable, ScreeningReport]:
        """Apply Tukey's fences to one parameter's training records.

        Args:
            table: Match-up table.
            parameter: Parameter value such as "chla".
            k: Fence multiplier.
            variable: "target", "reflectance" or "none".
            **kwargs: Additional fields for ScreeningPolicy.

        Returns:
            Tuple[MatchupTable, ScreeningReport]: Retained records and counts.
        """
        policy = ScreeningPolicy(
            k=k,
            variable=variable,
            **{key: value for key, value in kwargs.items() if key in ScreeningPolicy.model_fields},
        )
        return screen_table(table, ParameterId(parameter), policy, self.boundary_year)

    def split(self, table: MatchupTable) -> Tuple[MatchupTable, MatchupTable]:
        """Split a table into training and validation years."""
        return split_by_year(table, self.boundary_year)

    def save(self, table: MatchupTable, path: Path | str) -> Path:
        """Write a table in the match-up CSV layout."""
        return serialize_matchup_table(table, path)
