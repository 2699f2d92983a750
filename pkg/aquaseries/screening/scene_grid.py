"""Water masking, point extraction and `.sgrid` scene files.

An `.sgrid` file is a UTF-8 JSON header line (rows, cols, cell_size, origin, bands,
scene_date) terminated by a newline, followed by one little-endian float32 plane per
band in header order and a final uint8 land-mask plane, all row-major.
"""

import json
import logging
from datetime import date
from pathlib import Path
from typing import List, Tuple

import numpy as np

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.spectra import BAND_ORDER, BandId, Spectrum
from aquaseries.utils.files import atomic_write_bytes
from .schemas import (
    MNDWI_WATER_THRESHOLD,
    ExtractionResult,
    RejectionReason,
    SceneGrid,
)

logger = logging.getLogger(__name__)

SCENE_SUFFIX = ".sgrid"
GREEN_BAND = BandId.B3
SWIR_BAND = BandId.B11


def mndwi(green, swir):
    """Modified Normalized Difference Water Index (green - swir) / (green + swir).

    Returns NaN where green + swir == 0; such pixels are never water.
    """
    green = np.asarray(green, dtype=np.float64)
    swir = np.asarray(swir, dtype=np.float64)
    denominator = green + swir
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(denominator != 0.0, (green - swir) / denominator, np.nan)
    if values.ndim == 0:
        return float(values)
    return values


def is_water(index_value) -> np.ndarray | bool:
    """Classify MNDWI values as water (strictly above the threshold, NaN never water)."""
    values = np.asarray(index_value, dtype=np.float64)
    with np.errstate(invalid="ignore"):
        water = np.nan_to_num(values, nan=MNDWI_WATER_THRESHOLD) > MNDWI_WATER_THRESHOLD
    if water.ndim == 0:
        return bool(water)
    return water


def water_mask(scene: SceneGrid) -> np.ndarray:
    """Return the boolean water mask of a scene (B3 green, B11 SWIR)."""
    return is_water(mndwi(scene.bands[GREEN_BAND], scene.bands[SWIR_BAND]))


def extract_point(
    scene: SceneGrid,
    point: Tuple[float, float],
    buffer_radius: float = 20.0,
    min_land_distance: float = 200.0,
) -> ExtractionResult:
    """Average water reflectance within a buffer around a sampling point.

    Args:
        scene (SceneGrid): Source scene.
        point (Tuple[float, float]): Planar (x, y) in meters.
        buffer_radius (float): Cells whose centers lie within this distance are averaged.
        min_land_distance (float): Points closer than this to a land cell center are rejected.

    Returns:
        ExtractionResult: The mean spectrum, or a rejection (adjacency / no-water-pixels).

    Raises:
        AquaSeriesException: If the point lies outside the scene.
    """
    if not scene.contains(point):
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="POINT_OUT_OF_BOUNDS",
                error_message=f"Point {point} lies outside the scene of {scene.scene_date}.",
                category=ErrorCategory.DATA,
                details={"point": list(point), "scene_date": scene.scene_date.isoformat()},
            )
        )

    xs, ys = scene.cell_centers()
    distance = np.hypot(xs - point[0], ys - point[1])

    land_distance = None
    if scene.land_mask.any():
        land_distance = float(distance[scene.land_mask].min())
        if land_distance < min_land_distance:
            return ExtractionResult(
                rejection=RejectionReason.ADJACENCY, land_distance=land_distance
            )

    selected = (distance <= buffer_radius) & water_mask(scene) & ~scene.land_mask
    count = int(selected.sum())
    if count == 0:
        return ExtractionResult(
            rejection=RejectionReason.NO_WATER_PIXELS, land_distance=land_distance
        )

    reflectance = {
        band: float(np.mean(scene.bands[band][selected], dtype=np.float64))
        for band in BAND_ORDER
    }
    return ExtractionResult(
        spectrum=Spectrum(reflectance=reflectance),
        pixel_count=count,
        land_distance=land_distance,
    )


def scene_path(directory: Path | str, scene_date: date) -> Path:
    """Return the conventional `<scene_date>.sgrid` path inside a directory."""
    return Path(directory) / f"{scene_date.isoformat()}{SCENE_SUFFIX}"


def write_scene_grid(scene: SceneGrid, path: Path | str) -> Path:
    """Write a scene in the `.sgrid` layout."""
    rows, cols = scene.shape
    header = {
        "rows": rows,
        "cols": cols,
        "cell_size": scene.cell_size,
        "origin": list(scene.origin),
        "bands": [band.value for band in BAND_ORDER],
        "scene_date": scene.scene_date.isoformat(),
    }
    payload = [json.dumps(header, sort_keys=True).encode("utf-8"), b"\n"]
    for band in BAND_ORDER:
        payload.append(np.ascontiguousarray(scene.bands[band], dtype="<f4").tobytes())
    payload.append(np.ascontiguousarray(scene.land_mask, dtype=np.uint8).tobytes())
    return atomic_write_bytes(path, b"".join(payload))


def _format_error(path: Path, message: str) -> AquaSeriesException:
    return AquaSeriesException(
        AquaSeriesError(
            error_code="SCENE_FORMAT_ERROR",
            error_message=f"{path}: {message}",
            category=ErrorCategory.DATA,
            details={"path": str(path)},
        )
    )


def read_scene_grid(path: Path | str) -> SceneGrid:
    """Read a scene written by write_scene_grid."""
    source = Path(path)
    data = source.read_bytes()
    header_end = data.find(b"\n")
    if header_end < 0:
        raise _format_error(source, "missing JSON header line")
    try:
        header = json.loads(data[:header_end].decode("utf-8"))
        rows, cols = int(header["rows"]), int(header["cols"])
        band_names = header["bands"]
    except (ValueError, KeyError) as e:
        raise _format_error(source, f"invalid header ({e})")

    plane = rows * cols
    expected = header_end + 1 + plane * 4 * len(band_names) + plane
    if len(data) != expected:
        raise _format_error(source, f"expected {expected} bytes, found {len(data)}")

    offset = header_end + 1
    bands = {}
    for name in band_names:
        grid = np.frombuffer(data, dtype="<f4", count=plane, offset=offset)
        bands[BandId(name)] = grid.reshape(rows, cols).astype(np.float64)
        offset += plane * 4
    land = np.frombuffer(data, dtype=np.uint8, count=plane, offset=offset)
    return SceneGrid(
        scene_date=date.fromisoformat(header["scene_date"]),
        bands=bands,
        cell_size=float(header["cell_size"]),
        origin=tuple(header["origin"]),
        land_mask=land.reshape(rows, cols).astype(bool),
    )


def load_scene_directory(directory: Path | str) -> List[SceneGrid]:
    """Read every `.sgrid` file in a directory, sorted by scene date."""
    scenes = [read_scene_grid(path) for path in sorted(Path(directory).glob(f"*{SCENE_SUFFIX}"))]
    logger.info("Loaded %d scenes from %s", len(scenes), directory)
    return sorted(scenes, key=lambda scene: scene.scene_date)
