"""Adam optimizer with bias correction and per-epoch exponential learning-rate decay."""

from typing import Dict, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from .schemas import TrainConfig


class AdamMoments(BaseModel):
    """First and second moment estimates per parameter block.

    Attributes:
        m (Dict[str, np.ndarray]): First-moment estimates.
        v (Dict[str, np.ndarray]): Second-moment estimates.
        t (int): Number of steps taken.
    """

    m: Dict[str, np.ndarray] = Field(default_factory=dict)
    v: Dict[str, np.ndarray] = Field(default_factory=dict)
    t: int = Field(0, ge=0)

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @classmethod
    def zeros_like(cls, params: Dict[str, np.ndarray]) -> "AdamMoments":
        """Fresh zero moments shaped like params."""
        return cls(
            m={name: np.zeros_like(value) for name, value in params.items()},
            v={name: np.zeros_like(value) for name, value in params.items()},
        )


def effective_learning_rate(config: TrainConfig, epoch: int) -> float:
    """Learning rate at a zero-based epoch: learning_rate * decay_rate ** epoch."""
    return config.learning_rate * config.decay_rate**epoch


def adam_step(
    params: Dict[str, np.ndarray],
    grads: Dict[str, np.ndarray],
    moments: AdamMoments,
    t: int,
    config: TrainConfig,
    epoch: int = 0,
) -> Tuple[Dict[str, np.ndarray], AdamMoments]:
    """Apply one Adam update.

    Args:
        params (Dict[str, np.ndarray]): Current parameters; not modified.
        grads (Dict[str, np.ndarray]): Gradient per parameter block.
        moments (AdamMoments): Moments after step t - 1; not modified.
        t (int): One-based step index used for bias correction.
        config (TrainConfig): Learning rate, decay, beta1, beta2 and epsilon.
        epoch (int): Zero-based epoch selecting the decayed learning rate.

    Returns:
        Tuple[Dict[str, np.ndarray], AdamMoments]: Updated parameters and moments.

    Raises:
        AquaSeriesException: On t < 1, mismatched shapes, or a non-finite gradient.
    """
    if t < 1:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="INVALID_STEP",
                error_message=f"Adam step index must be >= 1, got {t}.",
                category=ErrorCategory.TRAINING,
            )
        )
    lr = effective_learning_rate(config, epoch)
    beta1, beta2, eps = config.beta1, config.beta2, config.epsilon
    new_params: Dict[str, np.ndarray] = {}
    new_m: Dict[str, np.ndarray] = {}
    new_v: Dict[str, np.ndarray] = {}
    for name, value in params.items():
        grad = np.asarray(grads[name], dtype=np.float64)
        if grad.shape != value.shape:
            raise AquaSeriesException(
                AquaSeriesError(
                    error_code="DIMENSION_MISMATCH",
                    error_message=(
                        f"Gradient for {name} has shape {grad.shape}, expected {value.shape}."
                    ),
                    category=ErrorCategory.TRAINING,
                    details={"block": name},
                )
            )
        if not np.isfinite(grad).all():
            raise AquaSeriesException(
                AquaSeriesError(
                    error_code="NON_FINITE_GRADIENT",
                    error_message=f"Non-finite gradient in parameter block {name}.",
                    category=ErrorCategory.TRAINING,
                    details={"block": name},
                )
            )
        m = beta1 * moments.m.get(name, np.zeros_like(value)) + (1.0 - beta1) * grad
        v = beta2 * moments.v.get(name, np.zeros_like(value)) + (1.0 - beta2) * grad**2
        m_hat = m / (1.0 - beta1**t)
        v_hat = v / (1.0 - beta2**t)
        new_params[name] = value - lr * m_hat / (np.sqrt(v_hat) + eps)
        new_m[name] = m
        new_v[name] = v
    return new_params, AdamMoments(m=new_m, v=new_v, t=t)
