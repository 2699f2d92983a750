"""Facade for feature construction, selection and LSTM training."""

from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from aquaseries.evaluation import SelectionConfig, SelectionResult, select_features
from aquaseries.features import (
    PUBLISHED_SELECTIONS,
    FeatureMatrix,
    enumerate_candidates,
    evaluate_features,
    parse_feature_list,
    write_feature_matrix,
)
from aquaseries.model import (
    FittedModel,
    ModelSnapshot,
    SequenceSet,
    TrainConfig,
    fit_model,
    load_model,
    predict_matrix,
    save_model,
)
from aquaseries.spectra import MatchupTable, ParameterId


class ModelingService:
    """Facade for turning match-up tables into trained models."""

    def __init__(self, seed: int = 42, boundary_year: int = 2020) -> None:
        """Initialize the modeling service."""
        self.seed = seed
        self.boundary_year = boundary_year

    def features(
        self,
        table: MatchupTable,
        names: Optional[Sequence[str]] = None,
        preset: Optional[str] = None,
        parameter: Optional[str] = None,
    ) -> FeatureMatrix:
        """Evaluate features over a table.

        Args:
            table: Match-up table.
            names: Literal feature names; all 136 candidates when omitted.
            preset: "published" to use the published list of `parameter`.
            parameter: Parameter whose published list is used.

        Returns:
            FeatureMatrix: One row per record.
        """
        if names:
            expressions = parse_feature_list(names)
        elif preset == "published":
            expressions = parse_feature_list(PUBLISHED_SELECTIONS[ParameterId(parameter)])
        else:
            expressions = enumerate_candidates()
        return evaluate_features(table, expressions)

    def training_rows(self, matrix: FeatureMatrix) -> List[int]:
        """Row indices dated before the boundary year."""
        return [row for row, day in enumerate(matrix.dates) if day.year < self.boundary_year]

    def select(
        self,
        matrix: FeatureMatrix,
        targets: Sequence[float],
        k_min: int = 4,
        k_max: int = 12,
        folds: int = 5,
        selection_epochs: int = 30,
        **kwargs,
    ) -> SelectionResult:
        """Select features on the training rows of a matrix.

        Args:
            matrix: Candidate features over all records.
            targets: Target per matrix row.
            k_min: Smallest feature count tried.
            k_max: Largest feature count tried.
            folds: Cross-validation folds.
            selection_epochs: Epochs per fold model.
            **kwargs: Additional fields for TrainConfig.

        Returns:
            SelectionResult: Selected names, ranking and scores.
        """
        selection = SelectionConfig(
            k_min=k_min, k_max=k_max, folds=folds, selection_epochs=selection_epochs
        )
        rows = self.training_rows(matrix)
        return select_features(
            matrix.take_rows(rows),
            np.asarray(targets, dtype=np.float64)[rows],
            selection,
            self._train_config(**kwargs),
        )

    def train(self, matrix: FeatureMatrix, targets: Sequence[float], **kwargs) -> FittedModel:
        """Train an LSTM on the matrix rows dated before the boundary year.

        Args:
            matrix: Selected features over all records.
            targets: Target per matrix row.
            **kwargs: Fields for TrainConfig such as epochs or learning_rate.

        Returns:
            FittedModel: Snapshot, loss history and the train/validation windows.
        """
        return fit_model(matrix, targets, self._train_config(**kwargs), self.boundary_year)

    def predict(
        self, snapshot: ModelSnapshot, matrix: FeatureMatrix, targets: Sequence[float]
    ) -> Tuple[SequenceSet, np.ndarray]:
        """Predict every window of a matrix with a trained snapshot."""
        return predict_matrix(snapshot, matrix, targets)

    def save_features(self, matrix: FeatureMatrix, path: Path | str) -> Path:
        """Write a feature matrix as CSV."""
        return write_feature_matrix(matrix, path)

    def save(self, snapshot: ModelSnapshot, path: Path | str) -> Path:
        """Write a model snapshot."""
        return save_model(snapshot, path)

    def load(self, path: Path | str) -> ModelSnapshot:
        """Read a model snapshot."""
        return load_model(path)

    def _train_config(self, **kwargs) -> TrainConfig:
        fields = {key: value for key, value in kwargs.items() if key in TrainConfig.model_fields}
        return TrainConfig(**{"seed": self.seed, **fields})
