"""AquaSeriesClient: A unified client for the water quality pipeline."""

from pathlib import Path
from typing import List

from aquaseries.pipeline import (
    PipelineResult,
    RunConfig,
    build_run_config,
    load_run_config,
    run_all_parameters,
    run_pipeline,
)
from aquaseries.services import MatchupService, ModelingService, ReportingService


class AquaSeriesClient:
    """Unified client for all pipeline stages."""

    def __init__(self, seed: int = 42, boundary_year: int = 2020) -> None:
        """Initialize the AquaSeriesClient with all service facades."""
        self.seed = seed
        self.boundary_year = boundary_year

        # matchups => ingest, extract, screen and split match-up tables
        self.matchups = MatchupService(boundary_year=boundary_year)

        # modeling => features, selection, training and prediction
        self.modeling = ModelingService(seed=seed, boundary_year=boundary_year)

        # reporting => metrics, report files and plot data
        self.reporting = ReportingService()

    def run(
        self, config: RunConfig | Path | str | None = None, **overrides
    ) -> PipelineResult:
        """Run the full pipeline from a RunConfig or a JSON config file.

        Args:
            config: RunConfig, or path of a JSON document.
            **overrides: Config entries replacing the document's, e.g. `train.epochs`.

        Returns:
            PipelineResult: Reports and the artifact directory.
        """
        return run_pipeline(self._config(config, overrides))

    def run_all(
        self, config: RunConfig | Path | str | None = None, **overrides
    ) -> List[PipelineResult]:
        """Run the pipeline for chla, ss and turbidity in sequence."""
        return run_all_parameters(self._config(config, overrides))

    def _config(self, config, overrides) -> RunConfig:
        if isinstance(config, RunConfig):
            if not overrides:
                return config
            return build_run_config(config.model_dump(mode="json"), overrides)
        return load_run_config(config, overrides)
