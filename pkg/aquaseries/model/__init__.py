from .schemas import NormalizationStats, SequenceSet, SequenceWindow, TrainConfig
from .lstm import (
    LstmCache,
    LstmModel,
    glorot_uniform_init,
    lstm_backward,
    lstm_forward,
    lstm_forward_batch,
    predict,
)
from .adam import AdamMoments, adam_step, effective_learning_rate
from .normalization import (
    apply_normalization,
    fit_normalization,
    fit_sequence_normalization,
    normalize_sequences,
)
from .sequences import build_sequences, partition_by_year
from .snapshot import ModelSnapshot, load_model, save_model
from .trainer import (
    FittedModel,
    TrainResult,
    fit_model,
    initialize_model,
    predict_matrix,
    predict_sequences,
    predict_snapshot,
    train,
)

__all__ = [
    "AdamMoments",
    "FittedModel",
    "LstmCache",
    "LstmModel",
    "ModelSnapshot",
    "NormalizationStats",
    "SequenceSet",
    "SequenceWindow",
    "TrainConfig",
    "TrainResult",
    "adam_step",
    "apply_normalization",
    "build_sequences",
    "effective_learning_rate",
    "fit_model",
    "fit_normalization",
    "fit_sequence_normalization",
    "glorot_uniform_init",
    "initialize_model",
    "load_model",
    "lstm_backward",
    "lstm_forward",
    "lstm_forward_batch",
    "normalize_sequences",
    "partition_by_year",
    "predict",
    "predict_matrix",
    "predict_sequences",
    "predict_snapshot",
    "save_model",
    "train",
]
