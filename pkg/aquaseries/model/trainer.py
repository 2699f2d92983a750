"""Minibatch training loop and inference for the LSTM regressor."""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.features import FeatureMatrix
from .adam import AdamMoments, adam_step
from .lstm import LstmModel, lstm_backward, lstm_forward_batch, predict
from .normalization import fit_sequence_normalization, normalize_sequences
from .schemas import NormalizationStats, SequenceSet, TrainConfig
from .sequences import build_sequences, partition_by_year
from .snapshot import ModelSnapshot

logger = logging.getLogger(__name__)


class TrainResult(BaseModel):
    """Outcome of a training run.

    Attributes:
        model (LstmModel): Trained network.
        loss_history (Tuple[float, ...]): Mean training loss per epoch, in normalized units.
        steps (int): Adam steps taken.
    """

    model: LstmModel
    loss_history: Tuple[float, ...]
    steps: int

    model_config = ConfigDict(arbitrary_types_allowed=True)


def initialize_model(input_dim: int, config: TrainConfig) -> LstmModel:
    """Create an untrained network sized and seeded by a training config."""
    return LstmModel.initialize(
        input_dim=input_dim,
        hidden_dim=config.hidden_dim,
        dropout_rate=config.dropout_rate,
        seed=config.seed,
        forget_bias=config.forget_bias,
    )


def _diverged(epoch: int, step: int, reason: str) -> AquaSeriesException:
    return AquaSeriesException(
        AquaSeriesError(
            error_code="TRAINING_DIVERGED",
            error_message=f"{reason} at epoch {epoch}, step {step}.",
            category=ErrorCategory.TRAINING,
            details={"epoch": epoch, "step": step},
        )
    )


def train(model: LstmModel, sequences: SequenceSet, config: TrainConfig) -> TrainResult:
    """Fit the network with Adam on minibatch mean squared error.

    Windows are reshuffled every epoch from a generator seeded with `config.seed`, which
    also draws the dropout masks, so the loss history is reproducible. The input model is
    left untouched; a trained copy is returned.

    Raises:
        AquaSeriesException: On an empty sequence set, or when the loss or any weight
            stops being finite (reported with epoch and step).
    """
    if not len(sequences):
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="EMPTY_SEQUENCE_SET",
                error_message="Cannot train on an empty sequence set.",
                category=ErrorCategory.DATA,
            )
        )
    inputs = sequences.inputs()
    targets = sequences.targets()
    count = len(targets)
    rng = np.random.default_rng(config.seed)
    trained = model.clone()
    moments = AdamMoments.zeros_like(trained.params)

    history = []
    step = 0
    for epoch in range(config.epochs):
        order = rng.permutation(count)
        squared_error = 0.0
        for start in range(0, count, config.batch_size):
            batch = order[start : start + config.batch_size]
            predictions, cache = lstm_forward_batch(
                trained, inputs[batch], dropout_active=True, rng=rng
            )
            residual = predictions - targets[batch]
            batch_error = float(residual @ residual)
            if not np.isfinite(batch_error):
                raise _diverged(epoch, step, "Loss is not finite")
            grads = lstm_backward(cache, 2.0 * residual / len(batch))
            step += 1
            try:
                params, moments = adam_step(
                    trained.params, grads, moments, step, config, epoch
                )
            except AquaSeriesException as e:
                raise _diverged(epoch, step, e.error.error_message or "Adam step failed")
            if not all(np.isfinite(value).all() for value in params.values()):
                raise _diverged(epoch, step, "Weights are not finite")
            trained.set_params(params)
            squared_error += batch_error
        history.append(squared_error / count)
        logger.debug("epoch %d loss %.6f", epoch, history[-1])

    logger.info(
        "Trained %d epochs (%d steps), final loss %.6f", config.epochs, step, history[-1]
    )
    return TrainResult(model=trained, loss_history=tuple(history), steps=step)


def predict_sequences(
    model: LstmModel,
    sequences: SequenceSet,
    normalization: Optional[NormalizationStats] = None,
) -> np.ndarray:
    """Predict every window, mapped back to parameter units when statistics are given."""
    predictions = predict(model, sequences.inputs())
    if normalization is not None:
        return normalization.denormalize_targets(predictions)
    return predictions


class FittedModel(BaseModel):
    """A trained snapshot together with the windows it was fitted and validated on.

    Attributes:
        snapshot (ModelSnapshot): Network, feature names, config and normalization.
        result (TrainResult): Loss history and step count.
        train_set (SequenceSet): Training windows in parameter units.
        validation_set (SequenceSet): Validation windows in parameter units.
    """

    snapshot: ModelSnapshot
    result: TrainResult
    train_set: SequenceSet
    validation_set: SequenceSet

    model_config = ConfigDict(arbitrary_types_allowed=True)


def fit_model(
    matrix: FeatureMatrix,
    targets: Sequence[float],
    config: TrainConfig,
    boundary_year: int,
) -> FittedModel:
    """Build windows, split them by year, normalize on the training side and train.

    Raises:
        AquaSeriesException: If no training windows can be built.
    """
    sequences = build_sequences(matrix, targets, config.sequence_length, config.pad_sequences)
    train_set, validation_set = partition_by_year(sequences, boundary_year)
    if not len(train_set):
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="EMPTY_PARTITION",
                error_message=(
                    f"No training windows of length {config.sequence_length} "
                    f"before {boundary_year}."
                ),
                category=ErrorCategory.DATA,
                details={"side": "train"},
            )
        )
    stats = fit_sequence_normalization(matrix, np.asarray(targets, dtype=np.float64), train_set)
    config = config.model_copy(update={"normalization": stats})
    model = initialize_model(len(matrix.names), config)
    result = train(model, normalize_sequences(train_set, stats), config)
    return FittedModel(
        snapshot=ModelSnapshot(
            model=result.model,
            feature_names=matrix.names,
            config=config,
            normalization=stats,
        ),
        result=result,
        train_set=train_set,
        validation_set=validation_set,
    )


def predict_snapshot(snapshot: ModelSnapshot, sequences: SequenceSet) -> np.ndarray:
    """Predict raw-unit windows with a snapshot, returning parameter units."""
    if snapshot.normalization is None:
        return predict_sequences(snapshot.model, sequences)
    return predict_sequences(
        snapshot.model,
        normalize_sequences(sequences, snapshot.normalization),
        snapshot.normalization,
    )


def predict_matrix(
    snapshot: ModelSnapshot, matrix: FeatureMatrix, targets: Sequence[float]
) -> Tuple[SequenceSet, np.ndarray]:
    """Window a feature matrix the way the snapshot was trained and predict every window.

    The matrix must contain the snapshot's features; extra columns are ignored.
    """
    missing = [name for name in snapshot.feature_names if name not in matrix.names]
    if missing:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="FEATURE_MISMATCH",
                error_message=f"Matrix lacks model features: {', '.join(missing)}",
                category=ErrorCategory.DATA,
            )
        )
    sequences = build_sequences(
        matrix.select(snapshot.feature_names),
        targets,
        snapshot.config.sequence_length,
        snapshot.config.pad_sequences,
    )
    return sequences, predict_snapshot(snapshot, sequences)
