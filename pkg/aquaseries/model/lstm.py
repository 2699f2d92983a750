"""Single-layer LSTM regressor with forward pass and backpropagation through time.

Gates follow the standard formulation with sigmoid forget/input/output gates and tanh
candidate and cell activations:

    f_t = σ(W_f x_t + U_f h_{t-1} + b_f)
    i_t = σ(W_i x_t + U_i h_{t-1} + b_i)
    o_t = σ(W_o x_t + U_o h_{t-1} + b_o)
    g_t = tanh(W_c x_t + U_c h_{t-1} + b_c)
    c_t = f_t * c_{t-1} + i_t * g_t
    h_t = o_t * tanh(c_t)
    ŷ   = w_out · dropout(h_W) + b_out

Every function works on minibatches; single windows are a batch of one.
"""

import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory

GATES: Tuple[str, ...] = ("f", "i", "o", "c")

PARAMETER_NAMES: Tuple[str, ...] = (
    *(f"W_{gate}" for gate in GATES),
    *(f"U_{gate}" for gate in GATES),
    *(f"b_{gate}" for gate in GATES),
    "w_out",
    "b_out",
)


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Logistic function, written through tanh to avoid exp overflow."""
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def glorot_uniform_init(
    fan_in: int, fan_out: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw a (fan_out, fan_in) matrix uniformly on [-L, L], L = sqrt(6 / (fan_in + fan_out)).

    Raises:
        AquaSeriesException: If either fan is not positive.
    """
    if fan_in < 1 or fan_out < 1:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="INVALID_FAN",
                error_message=f"Fans must be positive, got fan_in={fan_in}, fan_out={fan_out}.",
                category=ErrorCategory.CONFIG,
            )
        )
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_out, fan_in))


class LstmModel(BaseModel):
    """Weights of a single-hidden-layer LSTM with a linear output head.

    Attributes:
        input_dim (int): Features per timestep.
        hidden_dim (int): Hidden units.
        dropout_rate (float): Dropout probability on the final hidden state.
        rng_seed (int): Seed the weights were initialized with.
        params (Dict[str, np.ndarray]): W_* (hidden x input), U_* (hidden x hidden),
            b_* (hidden), w_out (1 x hidden), b_out (1).
    """

    input_dim: int = Field(..., ge=1)
    hidden_dim: int = Field(..., ge=1)
    dropout_rate: float = Field(0.0, ge=0.0, lt=1.0)
    rng_seed: int = 0
    params: Dict[str, np.ndarray]

    _version: int = PrivateAttr(default=0)

    model_config = ConfigDict(arbitrary_types_allowed=True)

    @classmethod
    def initialize(
        cls,
        input_dim: int,
        hidden_dim: int = 50,
        dropout_rate: float = 0.2,
        seed: int = 0,
        forget_bias: float = 1.0,
    ) -> "LstmModel":
        """Create a model with glorot-uniform weights and zero biases (forget bias aside)."""
        rng = np.random.default_rng(seed)
        params: Dict[str, np.ndarray] = {}
        for gate in GATES:
            params[f"W_{gate}"] = glorot_uniform_init(input_dim, hidden_dim, rng)
        for gate in GATES:
            params[f"U_{gate}"] = glorot_uniform_init(hidden_dim, hidden_dim, rng)
        for gate in GATES:
            params[f"b_{gate}"] = np.zeros(hidden_dim)
        params["b_f"] += forget_bias
        params["w_out"] = glorot_uniform_init(hidden_dim, 1, rng)
        params["b_out"] = np.zeros(1)
        return cls(
            input_dim=input_dim,
            hidden_dim=hidden_dim,
            dropout_rate=dropout_rate,
            rng_seed=seed,
            params=params,
        )

    @property
    def version(self) -> int:
        """Counter bumped on every parameter update."""
        return self._version

    def set_params(self, params: Dict[str, np.ndarray]) -> None:
        """Replace all parameters, invalidating earlier forward caches."""
        missing = set(PARAMETER_NAMES) - set(params)
        if missing:
            raise AquaSeriesException(
                AquaSeriesError(
                    error_code="PARAMETER_MISSING",
                    error_message=f"Missing parameter blocks: {sorted(missing)}",
                    category=ErrorCategory.TRAINING,
                )
            )
        self.params = {name: params[name] for name in PARAMETER_NAMES}
        self._version += 1

    def clone(self) -> "LstmModel":
        """Deep copy of the model."""
        return LstmModel(
            input_dim=self.input_dim,
            hidden_dim=self.hidden_dim,
            dropout_rate=self.dropout_rate,
            rng_seed=self.rng_seed,
            params={name: value.copy() for name, value in self.params.items()},
        )


class LstmCache(BaseModel):
    """Activations of one forward pass, consumed by lstm_backward."""

    model: LstmModel
    model_version: int
    steps: List[Dict[str, np.ndarray]]
    dropout_mask: np.ndarray
    hidden_out: np.ndarray

    model_config = ConfigDict(arbitrary_types_allowed=True)


def _dimension_error(message: str) -> AquaSeriesException:
    return AquaSeriesException(
        AquaSeriesError(
            error_code="DIMENSION_MISMATCH",
            error_message=message,
            category=ErrorCategory.DATA,
        )
    )


def lstm_forward_batch(
    model: LstmModel,
    windows: np.ndarray,
    dropout_active: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[np.ndarray, LstmCache]:
    """Run the recurrence over a (batch, W, input_dim) tensor from zero state.

    Args:
        model (LstmModel): Network weights.
        windows (np.ndarray): Input windows.
        dropout_active (bool): Apply inverted dropout to the final hidden state.
        rng (Optional[np.random.Generator]): Source of dropout masks.

    Returns:
        Tuple[np.ndarray, LstmCache]: (batch,) predictions and the backprop cache.
    """
    windows = np.asarray(windows, dtype=np.float64)
    if windows.ndim != 3 or windows.shape[2] != model.input_dim:
        raise _dimension_error(
            f"Expected windows of shape (batch, W, {model.input_dim}), got {windows.shape}."
        )
    p = model.params
    batch = windows.shape[0]
    h = np.zeros((batch, model.hidden_dim))
    c = np.zeros((batch, model.hidden_dim))
    steps = []
    for t in range(windows.shape[1]):
        x = windows[:, t, :]
        f = sigmoid(x @ p["W_f"].T + h @ p["U_f"].T + p["b_f"])
        i = sigmoid(x @ p["W_i"].T + h @ p["U_i"].T + p["b_i"])
        o = sigmoid(x @ p["W_o"].T + h @ p["U_o"].T + p["b_o"])
        g = np.tanh(x @ p["W_c"].T + h @ p["U_c"].T + p["b_c"])
        c_next = f * c + i * g
        tanh_c = np.tanh(c_next)
        steps.append(
            {"x": x, "h_prev": h, "c_prev": c, "f": f, "i": i, "o": o, "g": g, "tanh_c": tanh_c}
        )
        h, c = o * tanh_c, c_next

    if dropout_active and model.dropout_rate > 0.0:
        rng = rng if rng is not None else np.random.default_rng(model.rng_seed)
        keep = rng.random(h.shape) >= model.dropout_rate
        mask = keep / (1.0 - model.dropout_rate)
    else:
        mask = np.ones_like(h)
    hidden_out = h * mask
    predictions = hidden_out @ p["w_out"][0] + p["b_out"][0]
    cache = LstmCache(
        model=model,
        model_version=model.version,
        steps=steps,
        dropout_mask=mask,
        hidden_out=hidden_out,
    )
    return predictions, cache


def lstm_forward(
    model: LstmModel,
    window: np.ndarray,
    dropout_active: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Tuple[float, LstmCache]:
    """Predict from a single (W, input_dim) window.

    Raises:
        AquaSeriesException: If the window's column count differs from input_dim.
    """
    window = np.asarray(window, dtype=np.float64)
    if window.ndim != 2 or window.shape[1] != model.input_dim:
        raise _dimension_error(
            f"Expected a window of shape (W, {model.input_dim}), got {window.shape}."
        )
    predictions, cache = lstm_forward_batch(model, window[None, :, :], dropout_active, rng)
    return float(predictions[0]), cache


def lstm_backward(cache: LstmCache, loss_grad) -> Dict[str, np.ndarray]:
    """Backpropagate dL/dŷ through time.

    Args:
        cache (LstmCache): Cache of the matching forward pass.
        loss_grad: dL/dŷ, a scalar or one value per batch element. Gradients are summed
            over the batch.

    Returns:
        Dict[str, np.ndarray]: Gradient per parameter block, shaped like the parameter.

    Raises:
        AquaSeriesException: If the model changed since the forward pass, or the loss
            gradient does not match the batch.
    """
    model = cache.model
    if cache.model_version != model.version:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="STALE_CACHE",
                error_message=(
                    f"Forward cache is from parameter version {cache.model_version}, "
                    f"model is at {model.version}."
                ),
                category=ErrorCategory.TRAINING,
            )
        )
    batch = cache.hidden_out.shape[0]
    d_out = np.broadcast_to(np.asarray(loss_grad, dtype=np.float64), (batch,))
    if not d_out.shape == (batch,):
        raise _dimension_error(f"loss_grad must have {batch} entries.")

    p = model.params
    grads = {name: np.zeros_like(value) for name, value in p.items()}
    grads["w_out"] = (d_out @ cache.hidden_out)[None, :]
    grads["b_out"] = np.array([d_out.sum()])

    dh = d_out[:, None] * p["w_out"][0][None, :] * cache.dropout_mask
    dc_next = np.zeros_like(dh)
    for step in reversed(cache.steps):
        f, i, o, g, tanh_c = step["f"], step["i"], step["o"], step["g"], step["tanh_c"]
        do = dh * tanh_c
        dc = dh * o * (1.0 - tanh_c**2) + dc_next
        pre = {
            "f": dc * step["c_prev"] * f * (1.0 - f),
            "i": dc * g * i * (1.0 - i),
            "o": do * o * (1.0 - o),
            "c": dc * i * (1.0 - g**2),
        }
        dh = np.zeros_like(dh)
        for gate, dz in pre.items():
            grads[f"W_{gate}"] += dz.T @ step["x"]
            grads[f"U_{gate}"] += dz.T @ step["h_prev"]
            grads[f"b_{gate}"] += dz.sum(axis=0)
            dh += dz @ p[f"U_{gate}"]
        dc_next = dc * f
    return grads


def predict(model: LstmModel, windows: np.ndarray, batch_size: int = 256) -> np.ndarray:
    """Predict for a (n, W, input_dim) tensor with dropout off."""
    windows = np.asarray(windows, dtype=np.float64)
    if windows.shape[0] == 0:
        return np.empty(0)
    outputs = [
        lstm_forward_batch(model, windows[start : start + batch_size])[0]
        for start in range(0, windows.shape[0], batch_size)
    ]
    return np.concatenate(outputs)
