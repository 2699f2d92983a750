from .schemas import (
    MNDWI_WATER_THRESHOLD,
    ExtractionConfig,
    ExtractionResult,
    FenceResult,
    InSituSample,
    RejectionReason,
    SceneGrid,
    ScreenedVariable,
    ScreeningPolicy,
    ScreeningReport,
    TemporalMatch,
)
from .tukey import screen_table, tukey_fences
from .scene_grid import (
    extract_point,
    is_water,
    load_scene_directory,
    mndwi,
    read_scene_grid,
    scene_path,
    water_mask,
    write_scene_grid,
)
from .temporal_match import build_matchup_table, read_insitu_samples, temporal_match

__all__ = [
    "MNDWI_WATER_THRESHOLD",
    "ExtractionConfig",
    "ExtractionResult",
    "FenceResult",
    "InSituSample",
    "RejectionReason",
    "SceneGrid",
    "ScreenedVariable",
    "ScreeningPolicy",
    "ScreeningReport",
    "TemporalMatch",
    "build_matchup_table",
    "extract_point",
    "is_water",
    "load_scene_directory",
    "mndwi",
    "read_insitu_samples",
    "read_scene_grid",
    "scene_path",
    "screen_table",
    "temporal_match",
    "tukey_fences",
    "water_mask",
    "write_scene_grid",
]
