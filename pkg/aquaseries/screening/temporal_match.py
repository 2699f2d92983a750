"""Pair in-situ samples with near-coincident scenes and build match-up tables."""

import logging
from collections import Counter
from datetime import date
from pathlib import Path
from typing import Dict, List, Sequence

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.spectra import MatchupRecord, MatchupTable, ParameterId, read_csv_text
from aquaseries.utils.files import sha256_bytes
from .scene_grid import extract_point
from .schemas import ExtractionConfig, InSituSample, SceneGrid, TemporalMatch

logger = logging.getLogger(__name__)

SAMPLE_COLUMNS = ("station_id", "date", "lon", "lat", "x", "y", "chla", "ss", "turbidity")


def temporal_match(
    samples: Sequence[InSituSample],
    scene_dates: Sequence[date],
    max_day_difference: int = 1,
) -> TemporalMatch:
    """Pair each sample with at most one scene within the allowed day difference.

    The nearest scene date wins; equally near scenes resolve to the earlier date.
    """
    ordered = sorted(set(scene_dates))
    pairs = []
    unmatched = []
    for sample in samples:
        best = None
        for scene_date in ordered:
            gap = abs((scene_date - sample.sample_date).days)
            if gap <= max_day_difference and (best is None or gap < best[0]):
                best = (gap, scene_date)
        if best is None:
            unmatched.append(sample)
        else:
            pairs.append((sample, best[1]))
    if unmatched:
        logger.info(
            "%d of %d samples have no scene within %d day(s)",
            len(unmatched),
            len(samples),
            max_day_difference,
        )
    return TemporalMatch(pairs=pairs, unmatched=unmatched)


def read_insitu_samples(path: Path | str) -> List[InSituSample]:
    """Read station samples laid out as `station_id,date,lon,lat,x,y,chla,ss,turbidity`."""
    source = Path(path)
    if not source.is_file():
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="FILE_NOT_FOUND",
                error_message=f"In-situ sample file not found: {source}",
                category=ErrorCategory.DATA,
                details={"path": str(source)},
            )
        )
    frame = read_csv_text(source, SAMPLE_COLUMNS[0], dtype=str, keep_default_na=False).fillna("")
    missing = [column for column in SAMPLE_COLUMNS if column not in frame.columns]
    if missing:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="SCHEMA_MISSING_COLUMN",
                error_message=f"Required column '{missing[0]}' is missing.",
                category=ErrorCategory.DATA,
                details={"column": missing[0]},
            )
        )

    samples = []
    for offset, row in enumerate(frame.to_dict(orient="records")):
        try:
            targets = {
                parameter: float(row[parameter.value])
                for parameter in ParameterId
                if row[parameter.value].strip()
            }
            samples.append(
                InSituSample(
                    station_id=row["station_id"].strip(),
                    sample_date=date.fromisoformat(row["date"].strip()),
                    location=(float(row["lon"]), float(row["lat"])),
                    point=(float(row["x"]), float(row["y"])),
                    targets=targets,
                )
            )
        except ValueError as e:
            raise AquaSeriesException(
                AquaSeriesError(
                    error_code="ROW_INVALID",
                    error_message=f"line {offset + 2}: {str(e).splitlines()[0]}",
                    category=ErrorCategory.DATA,
                    details={"line": offset + 2},
                )
            )
    return samples


def build_matchup_table(
    samples: Sequence[InSituSample],
    scenes: Sequence[SceneGrid],
    config: ExtractionConfig | None = None,
) -> MatchupTable:
    """Match samples to scenes in time, then extract a buffer-mean spectrum per pair.

    Samples without targets, without a scene in time, or rejected by extraction are
    left out; rejections are counted per reason.
    """
    config = config or ExtractionConfig()
    by_date: Dict[date, SceneGrid] = {scene.scene_date: scene for scene in scenes}
    match = temporal_match(
        [sample for sample in samples if sample.targets],
        list(by_date),
        config.max_day_difference,
    )

    records = []
    rejections: Counter = Counter()
    for sample, scene_date in match.pairs:
        scene = by_date[scene_date]
        if not scene.contains(sample.point):
            rejections["out-of-bounds"] += 1
            continue
        result = extract_point(
            scene, sample.point, config.buffer_radius, config.min_land_distance
        )
        if not result.accepted:
            rejections[result.rejection.value] += 1
            continue
        records.append(
            MatchupRecord(
                station_id=sample.station_id,
                timestamp=sample.sample_date,
                location=sample.location,
                spectrum=result.spectrum,
                targets=sample.targets,
            )
        )

    for reason, count in sorted(rejections.items()):
        logger.info("Rejected %d match-ups: %s", count, reason)
    logger.info("Built %d match-up records from %d samples", len(records), len(samples))

    digest = sha256_bytes(
        "\n".join(sorted(scene.scene_date.isoformat() for scene in scenes)).encode("utf-8")
    )
    return MatchupTable.from_records(records, source="extract", digest=digest)

