"""Loading RunConfig documents with targeted overrides."""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from pydantic import ValidationError

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from .schemas import RunConfig

logger = logging.getLogger(__name__)

SEED_ENV_VAR = "AQUASERIES_SEED"


def _config_error(code: str, message: str, **details) -> AquaSeriesException:
    return AquaSeriesException(
        AquaSeriesError(
            error_code=code,
            error_message=message,
            category=ErrorCategory.CONFIG,
            stage="config",
            details=details or None,
        )
    )


def _merge(base: Dict[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """Apply overrides; dotted keys such as `train.epochs` reach into sections."""
    merged = {key: dict(value) if isinstance(value, dict) else value for key, value in base.items()}
    for key, value in overrides.items():
        if value is None:
            continue
        section, _, field = key.partition(".")
        if field:
            merged[section] = {**(merged.get(section) or {}), field: value}
        else:
            merged[section] = value
    return merged


def build_run_config(
    document: Mapping[str, Any], overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """Validate a config document after applying overrides and the seed variable.

    Raises:
        AquaSeriesException: A config error listing the first validation failure.
    """
    values = _merge(dict(document), overrides or {})
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None and env_seed.strip():
        try:
            values["seed"] = int(env_seed)
        except ValueError:
            raise _config_error(
                "INVALID_SEED", f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}."
            )
        logger.info("Seed %s taken from %s", values["seed"], SEED_ENV_VAR)
    try:
        return RunConfig(**values)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first.get("loc", ()))
        raise _config_error(
            "CONFIG_INVALID",
            f"{location or 'config'}: {first.get('msg', str(e))}",
            errors=len(e.errors()),
        )


def load_run_config(
    path: Optional[Path | str], overrides: Optional[Mapping[str, Any]] = None
) -> RunConfig:
    """Read a JSON RunConfig document and validate it.

    Args:
        path (Optional[Path | str]): Config file; None builds from overrides alone.
        overrides (Optional[Mapping[str, Any]]): Values replacing document entries;
            None values are ignored.

    Returns:
        RunConfig: The validated configuration.
    """
    document: Dict[str, Any] = {}
    if path is not None:
        source = Path(path)
        if not source.is_file():
            raise _config_error(
                "CONFIG_NOT_FOUND", f"Config file not found: {source}", path=str(source)
            )
        try:
            document = json.loads(source.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise _config_error(
                "CONFIG_INVALID", f"{source}: invalid JSON ({e.msg})", path=str(source)
            )
        if not isinstance(document, dict):
            raise _config_error(
                "CONFIG_INVALID", f"{source}: top level must be an object", path=str(source)
            )
    return build_run_config(document, overrides)
