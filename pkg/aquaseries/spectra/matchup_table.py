"""Match-up table ingestion, serialization and chronological splitting.

The CSV layout is `station_id,date,lon,lat,B1,...,B12,chla,ss,turbidity` with a
header row. Target cells may be empty; every reflectance cell must be a finite decimal.
"""

import logging
import math
import re
from collections import Counter
from datetime import date
from pathlib import Path
from typing import Dict, List, Tuple

import pandas as pd
from pydantic import ValidationError

from aquaseries.errors import AquaSeriesError, AquaSeriesException, ErrorCategory
from aquaseries.utils.files import atomic_write_text, sha256_file
from .schemas import (
    BAND_ORDER,
    MATCHUP_COLUMNS,
    IngestPolicy,
    MatchupRecord,
    MatchupTable,
    ParameterId,
    Spectrum,
)

logger = logging.getLogger(__name__)


def _row_error(line: int, message: str, **details) -> AquaSeriesException:
    return AquaSeriesException(
        AquaSeriesError(
            error_code="ROW_INVALID",
            error_message=f"line {line}: {message}",
            category=ErrorCategory.DATA,
            details={"line": line, **details},
        )
    )


def _schema_error(code: str, column: str, message: str) -> AquaSeriesException:
    return AquaSeriesException(
        AquaSeriesError(
            error_code=code,
            error_message=message,
            category=ErrorCategory.DATA,
            details={"column": column},
        )
    )


def read_csv_text(source: Path, first_column: str, **kwargs) -> pd.DataFrame:
    """Read a UTF-8 CSV with pandas, turning reader failures into data errors.

    Args:
        source (Path): CSV file.
        first_column (str): Column reported when the file has no header row.
        **kwargs: Passed to `pandas.read_csv`.

    Raises:
        AquaSeriesException: ROW_INVALID for a malformed row, SCHEMA_ENCODING for bytes
            that are not UTF-8, SCHEMA_MISSING_COLUMN for an empty file.
    """
    try:
        return pd.read_csv(source, encoding="utf-8", **kwargs)
    except pd.errors.EmptyDataError:
        raise _schema_error("SCHEMA_MISSING_COLUMN", first_column, f"{source} has no header row.")
    except pd.errors.ParserError as e:
        message = str(e).strip().splitlines()[0]
        found = re.search(r"line (\d+)", message)
        line = int(found.group(1)) if found else 0
        raise _row_error(line, message, path=str(source)) from e
    except UnicodeDecodeError as e:
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="SCHEMA_ENCODING",
                error_message=f"{source} is not UTF-8 text (byte offset {e.start}).",
                category=ErrorCategory.DATA,
                details={"path": str(source), "offset": e.start},
            )
        ) from e


def _check_header(header: List[str]) -> None:
    counts = Counter(header)
    for column, count in counts.items():
        if count > 1:
            raise _schema_error(
                "SCHEMA_DUPLICATE_COLUMN",
                column,
                f"Column '{column}' appears {count} times in the header.",
            )
    for column in MATCHUP_COLUMNS:
        if column not in counts:
            raise _schema_error(
                "SCHEMA_MISSING_COLUMN", column, f"Required column '{column}' is missing."
            )


def _parse_reflectance(raw: str, band: str, line: int, policy: IngestPolicy) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise _row_error(line, f"reflectance {band}={raw!r} is not a number", column=band)
    if not math.isfinite(value):
        raise _row_error(line, f"reflectance {band}={raw!r} is not finite", column=band)
    if value >= 0.0 or policy.allow_negative:
        return value
    if value < policy.negative_floor or not policy.clamp_negatives:
        raise _row_error(
            line,
            f"reflectance {band}={value} is below the allowed floor {policy.negative_floor}",
            column=band,
        )
    return 0.0


def _parse_row(row: Dict[str, str], line: int, policy: IngestPolicy) -> Tuple[MatchupRecord, int]:
    try:
        timestamp = date.fromisoformat(row["date"].strip())
    except ValueError:
        raise _row_error(line, f"date {row['date']!r} is not an ISO-8601 date", column="date")

    clamped = 0
    reflectance = {}
    for band in BAND_ORDER:
        raw = row[band.value].strip()
        value = _parse_reflectance(raw, band.value, line, policy)
        if value == 0.0 and raw and float(raw) < 0.0:
            clamped += 1
        reflectance[band] = value

    targets = {}
    for parameter in ParameterId:
        raw = row[parameter.value].strip()
        if not raw:
            continue
        try:
            targets[parameter] = float(raw)
        except ValueError:
            raise _row_error(
                line, f"{parameter.value}={raw!r} is not a number", column=parameter.value
            )

    try:
        lon, lat = float(row["lon"]), float(row["lat"])
        record = MatchupRecord(
            station_id=row["station_id"].strip(),
            timestamp=timestamp,
            location=(lon, lat),
            spectrum=Spectrum(reflectance=reflectance),
            targets=targets,
        )
    except (ValueError, ValidationError) as e:
        raise _row_error(line, str(e).splitlines()[0])
    return record, clamped


def ingest_matchup_table(
    path: Path | str, policy: IngestPolicy | None = None
) -> MatchupTable:
    """Read and validate a match-up CSV file.

    Args:
        path (Path | str): CSV file with the match-up column layout.
        policy (IngestPolicy | None): Negative reflectance policy. Defaults to IngestPolicy().

    Returns:
        MatchupTable: Records sorted by (date, station_id) with provenance recorded.

    Raises:
        AquaSeriesException: On a missing file, a missing or duplicate column, or an invalid row.
    """
    policy = policy or IngestPolicy()
    source = Path(path)
    if not source.is_file():
        raise AquaSeriesException(
            AquaSeriesError(
                error_code="FILE_NOT_FOUND",
                error_message=f"Match-up file not found: {source}",
                category=ErrorCategory.DATA,
                details={"path": str(source)},
            )
        )

    # pandas renames duplicated headers, so the raw header row is checked first.
    header = read_csv_text(source, MATCHUP_COLUMNS[0], header=None, nrows=1, dtype=str)
    _check_header([str(column).strip() for column in header.iloc[0].tolist()])

    frame = read_csv_text(
        source, MATCHUP_COLUMNS[0], dtype=str, keep_default_na=False, skipinitialspace=True
    ).fillna("")
    frame.columns = [column.strip() for column in frame.columns]

    records = []
    clamped = 0
    for offset, row in enumerate(frame.to_dict(orient="records")):
        record, row_clamped = _parse_row(row, offset + 2, policy)
        records.append(record)
        clamped += row_clamped

    if clamped:
        logger.info("Clamped %d small negative reflectances to 0 in %s", clamped, source)

    table = MatchupTable.from_records(
        records, source=str(source), digest=sha256_file(source)
    )
    logger.info(
        "Ingested %d match-up records from %s (digest %s)",
        len(table),
        source,
        table.provenance.digest[:12],
    )
    return table


def serialize_matchup_table(table: MatchupTable, path: Path | str) -> Path:
    """Write a table in the match-up CSV layout; re-ingesting it yields an equal table."""
    return atomic_write_text(path, table.to_csv_text())


def split_by_year(
    table: MatchupTable, boundary_year: int
) -> Tuple[MatchupTable, MatchupTable]:
    """Split a table into records before and from a boundary year.

    Args:
        table (MatchupTable): Sorted match-up table.
        boundary_year (int): First year of the validation side.

    Returns:
        Tuple[MatchupTable, MatchupTable]: (train, validation), both in table order.

    Raises:
        AquaSeriesException: If either side would be empty.
    """
    train = [record for record in table.records if record.timestamp.year < boundary_year]
    validation = [
        record for record in table.records if record.timestamp.year >= boundary_year
    ]
    for side, records in (("train", train), ("validation", validation)):
        if not records:
            raise AquaSeriesException(
                AquaSeriesError(
                    error_code="EMPTY_PARTITION",
                    error_message=f"Splitting at {boundary_year} leaves the {side} partition empty.",
                    category=ErrorCategory.DATA,
                    details={"side": side, "boundary_year": boundary_year},
                )
            )
    source = table.provenance.source
    digest = table.provenance.digest
    return (
        MatchupTable.from_records(train, source=source, digest=digest, partition="train"),
        MatchupTable.from_records(
            validation, source=source, digest=digest, partition="validation"
        ),
    )
