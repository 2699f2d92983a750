"""This module defines the training configuration and sequence schemas for the LSTM regressor.

It includes the optimizer and network hyperparameters, z-score normalization statistics,
input windows and the chronological sequence set.
"""

from datetime import date
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class NormalizationStats(BaseModel):
    """Z-score statistics fitted on the training split.

    Attributes:
        feature_names (Tuple[str, ...]): Features the statistics belong to, in column order.
        feature_mean (List[float]): Per-feature mean.
        feature_std (List[float]): Per-feature population standard deviation (1 where zero).
        target_mean (float): Target mean.
        target_std (float): Target population standard deviation (1 where zero).
    """

    feature_names: Tuple[str, ...]
    feature_mean: List[float]
    feature_std: List[float]
    target_mean: float = 0.0
    target_std: float = 1.0

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def validate_lengths(self) -> "NormalizationStats":
        """Check that the statistics cover every feature and scales are positive."""
        if not (len(self.feature_names) == len(self.feature_mean) == len(self.feature_std)):
            raise ValueError("feature statistics must align with feature_names")
        if any(std <= 0 for std in self.feature_std) or self.target_std <= 0:
            raise ValueError("standard deviations must be positive")
        return self

    def normalize_features(self, values: np.ndarray) -> np.ndarray:
        """Apply the feature z-score to an (n, d) matrix."""
        return (values - np.asarray(self.feature_mean)) / np.asarray(self.feature_std)

    def normalize_targets(self, targets: np.ndarray) -> np.ndarray:
        """Apply the target z-score."""
        return (np.asarray(targets, dtype=np.float64) - self.target_mean) / self.target_std

    def denormalize_targets(self, targets: np.ndarray) -> np.ndarray:
        """Map normalized targets back to parameter units."""
        return np.asarray(targets, dtype=np.float64) * self.target_std + self.target_mean


class TrainConfig(BaseModel):
    """Network and optimizer hyperparameters.

    Attributes:
        learning_rate (float): Adam step size at epoch 0.
        decay_rate (float): Per-epoch exponential learning-rate decay.
        beta1 (float): Adam first-moment decay (the "momentum" of 0.9).
        beta2 (float): Adam second-moment decay.
        epsilon (float): Adam denominator guard.
        epochs (int): Training epochs.
        batch_size (int): Sequences per minibatch.
        sequence_length (int): Window length W in records.
        pad_sequences (bool): Left-pad short station histories with their earliest record.
        dropout_rate (float): Dropout probability on the final hidden state.
        hidden_dim (int): LSTM hidden units.
        forget_bias (float): Initial forget-gate bias.
        seed (int): Seed for initialization, shuffling and dropout.
        normalization (Optional[NormalizationStats]): Statistics of the training split.
    """

    learning_rate: float = Field(0.001, gt=0.0)
    decay_rate: float = Field(0.97, gt=0.0, le=1.0)
    beta1: float = Field(0.9, ge=0.0, lt=1.0)
    beta2: float = Field(0.999, ge=0.0, lt=1.0)
    epsilon: float = Field(1e-8, gt=0.0)
    epochs: int = Field(200, ge=1)
    batch_size: int = Field(16, ge=1)
    sequence_length: int = Field(4, ge=1)
    pad_sequences: bool = False
    dropout_rate: float = Field(0.2, ge=0.0, lt=1.0)
    hidden_dim: int = Field(50, ge=1)
    forget_bias: float = 1.0
    seed: int = 42
    normalization: Optional[NormalizationStats] = None

    model_config = ConfigDict(
        frozen=True,
        json_schema_extra={
            "example": {
                "learning_rate": 0.001,
                "decay_rate": 0.97,
                "beta1": 0.9,
                "beta2": 0.999,
                "epsilon": 1e-8,
                "epochs": 200,
                "batch_size": 16,
                "sequence_length": 4,
                "dropout_rate": 0.2,
                "hidden_dim": 50,
                "seed": 42,
            }
        },
    )


class SequenceWindow(BaseModel):
    """One input window and the target at its final record.

    Attributes:
        window (np.ndarray): (W, input_dim) feature rows in date order.
        target (float): Target value at the final record.
        station_id (str): Station all timesteps belong to.
        end_date (date): Date of the final record.
        row (int): Feature-matrix row of the final record.
    """

    window: np.ndarray
    target: float
    station_id: str
    end_date: date
    row: int

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


class SequenceSet(BaseModel):
    """Windows ordered chronologically by final-record date, ties by station."""

    windows: Tuple[SequenceWindow, ...]
    sequence_length: int = Field(..., ge=1)
    input_dim: int = Field(..., ge=0)

    model_config = ConfigDict(frozen=True)

    def __len__(self) -> int:
        return len(self.windows)

    def inputs(self) -> np.ndarray:
        """Return the stacked (n, W, input_dim) input tensor."""
        if not self.windows:
            return np.empty((0, self.sequence_length, self.input_dim))
        return np.stack([item.window for item in self.windows])

    def targets(self) -> np.ndarray:
        """Return the (n,) target vector."""
        return np.array([item.target for item in self.windows], dtype=np.float64)

    def subset(self, indices: Sequence[int]) -> "SequenceSet":
        """Return the windows at the given indices, in the given order."""
        return SequenceSet(
            windows=tuple(self.windows[index] for index in indices),
            sequence_length=self.sequence_length,
            input_dim=self.input_dim,
        )

