"""This module defines the schemas for model evaluation and feature selection.

It includes evaluation reports, fold plans, the selection configuration and the
selection outcome.
"""

from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from aquaseries.spectra import ParameterId

METRIC_TOLERANCE = 1e-9


class EvalReport(BaseModel):
    """Accuracy of one model on one split.

    Attributes:
        parameter (ParameterId): Water-quality parameter.
        split (str): "train" or "validation".
        method (str): Estimator label in the exported table.
        n (int): Number of observed/estimated pairs.
        r (Optional[float]): Pearson correlation; None when either series is constant.
        r2 (Optional[float]): Coefficient of determination; None when observations are constant.
        rmse (float): Root mean squared error in parameter units.
        mae (float): Mean absolute error in parameter units.
        smape (float): Symmetric mean absolute percentage error in percent.
        config_digest (str): Digest of the run configuration.
        selected_features (Tuple[str, ...]): Model inputs.
    """

    parameter: ParameterId
    split: Literal["train", "validation"]
    method: str = "LSTM"
    n: int = Field(..., ge=1)
    r: Optional[float] = None
    r2: Optional[float] = None
    rmse: float = Field(..., ge=0.0)
    mae: float = Field(..., ge=0.0)
    smape: float = Field(..., ge=0.0, le=200.0)
    config_digest: str = ""
    selected_features: Tuple[str, ...] = ()

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "parameter": "chla",
                "split": "validation",
                "method": "LSTM",
                "n": 52,
                "r": 0.91,
                "r2": 0.8,
                "rmse": 2.05,
                "mae": 1.63,
                "smape": 40.9,
                "config_digest": "5d41402abc4b2a76b9719d911017c592",
                "selected_features": ["B2", "NR(B2,B3)", "LH(B7,B8A,B11)", "(B4)^3"],
            }
        },
    )

    @model_validator(mode="after")
    def validate_metrics(self) -> "EvalReport":
        """Check r bounds and that RMSE is not below MAE."""
        if self.r is not None and not -1.0 - METRIC_TOLERANCE <= self.r <= 1.0 + METRIC_TOLERANCE:
            raise ValueError(f"r must lie in [-1, 1], got {self.r}")
        if self.rmse + METRIC_TOLERANCE < self.mae:
            raise ValueError(f"rmse ({self.rmse}) must not be below mae ({self.mae})")
        return self


class FoldPlan(BaseModel):
    """Forward-chaining folds over a chronologically sorted sequence set.

    Attributes:
        n (int): Number of sequences.
        folds (Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]): (train, test) index pairs.
    """

    n: int = Field(..., ge=2)
    folds: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...]], ...]

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_order(self) -> "FoldPlan":
        """Enforce train-before-test, contiguous disjoint test blocks and growing train sets."""
        previous_test_end = None
        previous_train = 0
        for train, test in self.folds:
            if not train or not test:
                raise ValueError("every fold needs train and test indices")
            if max(train) >= min(test):
                raise ValueError("train indices must precede test indices")
            if list(test) != list(range(test[0], test[-1] + 1)):
                raise ValueError("test blocks must be contiguous")
            if previous_test_end is not None and test[0] != previous_test_end + 1:
                raise ValueError("test blocks must be adjacent and disjoint")
            if len(train) <= previous_train:
                raise ValueError("training sets must grow from fold to fold")
            previous_test_end = test[-1]
            previous_train = len(train)
        if previous_test_end is not None and previous_test_end != self.n - 1:
            raise ValueError("test blocks must end at the last index")
        return self

    @property
    def fold_count(self) -> int:
        """Number of folds."""
        return len(self.folds)


class SelectionConfig(BaseModel):
    """Bounds and budget of correlation-ranked feature selection.

    Attributes:
        k_min (int): Smallest feature count tried.
        k_max (int): Largest feature count tried.
        folds (int): Cross-validation folds.
        selection_epochs (int): Training epochs per fold model during selection.
        preset (Optional[str]): "published" to skip selection and use the published lists.
    """

    k_min: int = Field(4, ge=1, description="Smallest feature count tried.")
    k_max: int = Field(12, ge=1, description="Largest feature count tried.")
    folds: int = Field(5, ge=2, description="TimeSeriesSplit folds on the training split.")
    selection_epochs: int = Field(
        30, ge=1, description="Epochs per fold model while scoring feature counts."
    )
    preset: Optional[Literal["published"]] = Field(
        None, description="Use the published feature lists instead of selecting."
    )

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {"k_min": 4, "k_max": 12, "folds": 5, "selection_epochs": 30}
        },
    )

    @model_validator(mode="before")
    @classmethod
    def validate(cls, values):
        """Validate the feature-count bounds."""
        cls._validate_bounds(values)
        return values

    @classmethod
    def _validate_bounds(cls, values) -> None:
        if not isinstance(values, dict):
            return
        k_min = values.get("k_min", 4)
        k_max = values.get("k_max", 12)
        if isinstance(k_min, int) and isinstance(k_max, int) and k_min > k_max:
            raise ValueError(f"k_min ({k_min}) must not exceed k_max ({k_max})")


class RankedFeature(BaseModel):
    """A candidate with its absolute correlation against the target."""

    name: str
    abs_r: float = Field(..., ge=0.0)

    model_config = ConfigDict(frozen=True)


class SelectionResult(BaseModel):
    """Outcome of feature selection.

    Attributes:
        selected (Tuple[str, ...]): Chosen features, most correlated first.
        ranking (Tuple[RankedFeature, ...]): Ranked candidates after de-duplication.
        skipped_constant (Tuple[str, ...]): Constant columns left out of ranking.
        dropped_collinear (Tuple[str, ...]): Candidates exactly collinear with a better one.
        scores (Dict[int, float]): Mean cross-validated RMSE per feature count.
    """

    selected: Tuple[str, ...]
    ranking: Tuple[RankedFeature, ...] = ()
    skipped_constant: Tuple[str, ...] = ()
    dropped_collinear: Tuple[str, ...] = ()
    scores: Dict[int, float] = Field(default_factory=dict)

    model_config = ConfigDict(frozen=True)

    @property
    def k(self) -> int:
        """Number of selected features."""
        return len(self.selected)

    def ranked_names(self) -> List[str]:
        """Names in ranking order."""
        return [item.name for item in self.ranking]
