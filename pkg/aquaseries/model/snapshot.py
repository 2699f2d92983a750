"""Model snapshot files.

A snapshot is the header line `AQUASERIES-LSTM-v1`, a JSON manifest line (dimensions,
training config, seed, feature names, normalization statistics, array shapes) and the
weight arrays as little-endian float64 in manifest order.
"""

import json
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.utils.files import atomic_write_bytes
from .lstm import PARAMETER_NAMES, LstmModel
from .schemas import NormalizationStats, TrainConfig

SNAPSHOT_HEADER = b"AQUASERIES-LSTM-v1\n"


class ModelSnapshot(BaseModel):
    """A trained network with everything needed to reuse it on new records."""

    model: LstmModel
    feature_names: Tuple[str, ...]
    config: TrainConfig
    normalization: Optional[NormalizationStats] = None

    model_config = ConfigDict(arbitrary_types_allowed=True)


def _snapshot_error(path: Path, message: str) -> AquaSeriesException:
    return AquaSeriesException(
        AquaSeriesError(
            error_code="SNAPSHOT_FORMAT_ERROR",
            error_message=f"{path}: {message}",
            category=ErrorCategory.DATA,
            details={"path": str(path)},
        )
    )


def save_model(snapshot: ModelSnapshot, path: Path | str) -> Path:
    """Write a snapshot; identical snapshots produce identical bytes."""
    model = snapshot.model
    manifest = {
        "input_dim": model.input_dim,
        "hidden_dim": model.hidden_dim,
        "dropout_rate": model.dropout_rate,
        "rng_seed": model.rng_seed,
        "feature_names": list(snapshot.feature_names),
        "config": snapshot.config.model_dump(mode="json", exclude={"normalization"}),
        "normalization": (
            snapshot.normalization.model_dump(mode="json") if snapshot.normalization else None
        ),
        "arrays": [
            {"name": name, "shape": list(model.params[name].shape)} for name in PARAMETER_NAMES
        ],
    }
    payload = [
        SNAPSHOT_HEADER,
        json.dumps(manifest, sort_keys=True).encode("utf-8"),
        b"\n",
    ]
    payload.extend(
        np.ascontiguousarray(model.params[name], dtype="<f8").tobytes()
        for name in PARAMETER_NAMES
    )
    return atomic_write_bytes(path, b"".join(payload))


def load_model(path: Path | str) -> ModelSnapshot:
    """Read a snapshot written by save_model.

    Raises:
        AquaSeriesException: If the file is missing, has another header, or is truncated.
    """
    source = Path(path)
    if not source.is_file():
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="FILE_NOT_FOUND",
                error_message=f"Model snapshot not found: {source}",
                category=ErrorCategory.DATA,
                details={"path": str(source)},
            )
        )
    data = source.read_bytes()
    if not data.startswith(SNAPSHOT_HEADER):
        raise _snapshot_error(source, "not an AQUASERIES-LSTM-v1 snapshot")
    manifest_end = data.find(b"\n", len(SNAPSHOT_HEADER))
    if manifest_end < 0:
        raise _snapshot_error(source, "missing manifest line")
    try:
        manifest = json.loads(data[len(SNAPSHOT_HEADER) : manifest_end].decode("utf-8"))
        shapes = {item["name"]: tuple(item["shape"]) for item in manifest["arrays"]}
    except (ValueError, KeyError) as e:
        raise _snapshot_error(source, f"invalid manifest ({e})")

    params = {}
    offset = manifest_end + 1
    for name in PARAMETER_NAMES:
        shape = shapes.get(name)
        if shape is None:
            raise _snapshot_error(source, f"array {name} missing from manifest")
        count = int(np.prod(shape))
        if offset + count * 8 > len(data):
            raise _snapshot_error(source, f"truncated at array {name}")
        params[name] = (
            np.frombuffer(data, dtype="<f8", count=count, offset=offset)
            .reshape(shape)
            .astype(np.float64)
        )
        offset += count * 8
    if offset != len(data):
        raise _snapshot_error(source, f"{len(data) - offset} trailing bytes")

    try:
        return ModelSnapshot(
            model=LstmModel(
                input_dim=manifest["input_dim"],
                hidden_dim=manifest["hidden_dim"],
                dropout_rate=manifest["dropout_rate"],
                rng_seed=manifest["rng_seed"],
                params=params,
            ),
            feature_names=tuple(manifest["feature_names"]),
            config=TrainConfig(**manifest["config"]),
            normalization=(
                NormalizationStats(**manifest["normalization"])
                if manifest.get("normalization")
                else None
            ),
        )
    except (ValidationError, KeyError) as e:
        raise _snapshot_error(source, f"invalid manifest ({e})")
