"""Unit tests for match-up CSV ingestion, serialization and year splitting."""

from datetime import date

import pandas as pd
import pytest

from aquaseries.errors import AquaSeriesException, ErrorCategory
from aquaseries.spectra import (
    BAND_ORDER,
    MATCHUP_COLUMNS,
    BandId,
    IngestPolicy,
    MatchupTable,
    ParameterId,
    ingest_matchup_table,
    serialize_matchup_table,
    split_by_year,
)


def _row(station="S1", day="2019-01-15", value=0.02, chla=5.0, **bands):
    row = {"station_id": station, "date": day, "lon": 114.2, "lat": 22.3}
    row.update({band.value: value for band in BAND_ORDER})
    row.update(bands)
    row.update({"chla": chla, "ss": None, "turbidity": None})
    return row


def _write(path, rows, columns=MATCHUP_COLUMNS):
    pd.DataFrame(rows, columns=list(columns)).to_csv(path, index=False, lineterminator="\n")
    return path


@pytest.fixture
def csv_path(tmp_path):
    """Path for a test match-up CSV."""
    return tmp_path / "matchups.csv"


def test_ingest_sorts_rows(csv_path):
    """Rows out of date order come back sorted ascending."""
    _write(
        csv_path,
        [_row(day="2019-03-01"), _row(day="2017-01-01"), _row(day="2018-06-30")],
    )
    table = ingest_matchup_table(csv_path)
    assert [record.timestamp.isoformat() for record in table.records] == [
        "2017-01-01",
        "2018-06-30",
        "2019-03-01",
    ]
    assert table.provenance.source == str(csv_path)
    assert len(table.provenance.digest) == 64


def test_ingest_reads_optional_targets(csv_path):
    """Empty target cells are absent parameters."""
    _write(csv_path, [_row()])
    record = ingest_matchup_table(csv_path).records[0]
    assert record.target(ParameterId.CHLA) == 5.0
    assert record.target(ParameterId.SS) is None


def test_ingest_counts_all_rows(csv_path):
    """Every valid row is kept."""
    rows = [_row(station=f"S{i % 7}", day=f"20{15 + i % 6}-0{1 + i % 9}-1{i % 10}") for i in range(352)]
    _write(csv_path, rows)
    assert ingest_matchup_table(csv_path).provenance.row_count == 352


def test_missing_column_is_named(csv_path):
    """A missing band column raises a schema error naming it."""
    columns = [column for column in MATCHUP_COLUMNS if column != "B8A"]
    _write(csv_path, [_row()], columns=columns)
    with pytest.raises(AquaSeriesException) as exc_info:
        ingest_matchup_table(csv_path)
    assert exc_info.value.error_code == "SCHEMA_MISSING_COLUMN"
    assert exc_info.value.error.details == {"column": "B8A"}
    assert "B8A" in str(exc_info.value)
    assert exc_info.value.category == ErrorCategory.DATA


def test_duplicate_column_is_named(csv_path):
    """A duplicated band column raises a schema error naming it."""
    header = ",".join(list(MATCHUP_COLUMNS) + ["B2"])
    values = ",".join(["S1", "2019-01-01", "114.2", "22.3"] + ["0.02"] * 10 + ["5", "", "", "0.02"])
    csv_path.write_text(header + "\n" + values + "\n", encoding="utf-8")
    with pytest.raises(AquaSeriesException) as exc_info:
        ingest_matchup_table(csv_path)
    assert exc_info.value.error_code == "SCHEMA_DUPLICATE_COLUMN"
    assert exc_info.value.error.details == {"column": "B2"}


def test_bad_date_reports_line(csv_path):
    """An unparseable date raises a row error with its line number."""
    _write(csv_path, [_row(), _row(day="2019-13-01")])
    with pytest.raises(AquaSeriesException) as exc_info:
        ingest_matchup_table(csv_path)
    assert exc_info.value.error_code == "ROW_INVALID"
    assert exc_info.value.error.details["line"] == 3


@pytest.mark.parametrize("raw", ["inf", "nan", "abc"])
def test_non_finite_reflectance_rejected(csv_path, raw):
    """Reflectances must be finite decimals."""
    _write(csv_path, [_row(B4=raw)])
    with pytest.raises(AquaSeriesException) as exc_info:
        ingest_matchup_table(csv_path)
    assert exc_info.value.error_code == "ROW_INVALID"
    assert exc_info.value.error.details["column"] == "B4"


def _good_line():
    return ",".join(["S1", "2019-01-15", "114.2", "22.3"] + ["0.02"] * len(BAND_ORDER) + ["5.0", "", ""])


def test_extra_field_is_a_row_error(csv_path):
    """A row with more fields than the header is a data error naming its line."""
    header = ",".join(MATCHUP_COLUMNS)
    csv_path.write_text(f"{header}\n{_good_line()}\n{_good_line()},0.5\n", encoding="utf-8")
    with pytest.raises(AquaSeriesException) as exc_info:
        ingest_matchup_table(csv_path)
    assert exc_info.value.error_code == "ROW_INVALID"
    assert exc_info.value.exit_code == 3
    assert exc_info.value.error.details["line"] == 3


def test_non_utf8_bytes_are_a_data_error(csv_path):
    """Bytes that do not decode as UTF-8 are reported as a data error."""
    header = ",".join(MATCHUP_COLUMNS).encode("utf-8")
    csv_path.write_bytes(header + b"\nS\xff\xfe" + _good_line().encode("utf-8")[2:] + b"\n")
    with pytest.raises(AquaSeriesException) as exc_info:
        ingest_matchup_table(csv_path)
    assert exc_info.value.error_code == "SCHEMA_ENCODING"
    assert exc_info.value.category == ErrorCategory.DATA


def test_small_negative_is_clamped(csv_path):
    """Negatives between the floor and 0 are clamped to 0 by default."""
    _write(csv_path, [_row(B5=-0.005)])
    record = ingest_matchup_table(csv_path).records[0]
    assert record.spectrum.value(BandId.B5) == 0.0


def test_large_negative_is_rejected(csv_path):
    """Negatives below the floor reject the row."""
    _write(csv_path, [_row(B5=-0.05)])
    with pytest.raises(AquaSeriesException, match="floor"):
        ingest_matchup_table(csv_path)


def test_allow_negative_policy_keeps_values(csv_path):
    """allow_negative keeps negative reflectances as they are."""
    _write(csv_path, [_row(B5=-0.05)])
    table = ingest_matchup_table(csv_path, IngestPolicy(allow_negative=True))
    assert table.records[0].spectrum.value(BandId.B5) == -0.05


def test_strict_policy_rejects_small_negative(csv_path):
    """Without clamping, any negative value rejects the row."""
    _write(csv_path, [_row(B5=-0.005)])
    with pytest.raises(AquaSeriesException):
        ingest_matchup_table(csv_path, IngestPolicy(clamp_negatives=False))


def test_missing_file(tmp_path):
    """A missing file is a data error naming the path."""
    with pytest.raises(AquaSeriesException) as exc_info:
        ingest_matchup_table(tmp_path / "absent.csv")
    assert exc_info.value.error_code == "FILE_NOT_FOUND"
    assert exc_info.value.exit_code == 3


def test_serialize_round_trip(matchup_csv, tmp_path):
    """Serializing and re-ingesting yields a digest-equal table."""
    table = ingest_matchup_table(matchup_csv)
    copy_path = serialize_matchup_table(table, tmp_path / "copy.csv")
    again = ingest_matchup_table(copy_path)
    assert again.digest() == table.digest()
    assert again.records == table.records
    assert serialize_matchup_table(again, tmp_path / "copy2.csv").read_bytes() == copy_path.read_bytes()


@pytest.fixture
def five_rows(make_record):
    """Five records dated 2016, 2017, 2018, 2020 and 2020."""
    days = [date(2016, 3, 1), date(2017, 3, 1), date(2018, 3, 1), date(2020, 3, 1), date(2020, 4, 1)]
    return MatchupTable.from_records(
        [make_record("S1", day) for day in days], source="memory", digest="0"
    )


def test_split_by_year_counts(five_rows):
    """Records before the boundary train, the rest validate."""
    train, validation = split_by_year(five_rows, 2020)
    assert len(train) == 3
    assert len(validation) == 2
    assert train.provenance.partition == "train"
    assert validation.provenance.partition == "validation"


def test_split_partitions_every_record(five_rows):
    """Each record lands on exactly one side and order is preserved."""
    train, validation = split_by_year(five_rows, 2018)
    assert train.records + validation.records == five_rows.records


def test_split_empty_validation(make_record):
    """A table entirely before the boundary leaves validation empty."""
    table = MatchupTable.from_records(
        [make_record("S1", date(2019, month, 1)) for month in range(1, 4)],
        source="memory",
        digest="0",
    )
    with pytest.raises(AquaSeriesException) as exc_info:
        split_by_year(table, 2020)
    assert exc_info.value.error_code == "EMPTY_PARTITION"
    assert exc_info.value.error.details["side"] == "validation"
