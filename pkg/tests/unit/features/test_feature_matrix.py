"""Unit tests for candidate enumeration and feature evaluation."""

from collections import Counter
from datetime import date

import numpy as np
import pytest
from pydantic import ValidationError

from aquaseries.errors import AquaSeriesException
from aquaseries.features import (
    PUBLISHED_SELECTIONS,
    BandFeature,
    FeatureMatrix,
    NormRatioFeature,
    enumerate_candidates,
    evaluate_features,
    parse_feature,
    parse_feature_list,
    write_feature_matrix,
)
from aquaseries.spectra import BAND_ORDER, BandId, MatchupTable, ParameterId


@pytest.fixture
def table(make_record):
    """Three records whose band k reflectance is 0.01 * (k + 1) times the row number."""
    records = []
    for row in range(1, 4):
        reflectance = {band: 0.01 * (k + 1) * row for k, band in enumerate(BAND_ORDER)}
        records.append(make_record("S1", date(2019, row, 1), reflectance=reflectance))
    return MatchupTable.from_records(records, source="memory", digest="0")


def test_candidate_count_and_kinds():
    """136 unique candidates: 10 bands, 20 powers, 90 ratios, 8 TB and 8 LH."""
    candidates = enumerate_candidates()
    assert len(candidates) == 136
    assert len({candidate.name for candidate in candidates}) == 136
    assert Counter(candidate.kind for candidate in candidates) == {
        "band": 10,
        "power": 20,
        "norm_ratio": 90,
        "three_band": 8,
        "line_height": 8,
    }


def test_candidate_order_is_fixed():
    """The enumeration starts with raw bands and ends with line heights."""
    names = [candidate.name for candidate in enumerate_candidates()]
    assert names[:2] == ["B1", "B2"]
    assert names[10] == "(B1)^2"
    assert names[30] == "NR(B1,B2)"
    assert names[-1] == "LH(B8A,B11,B12)"
    assert names == [candidate.name for candidate in enumerate_candidates()]


def test_band_and_power_columns(table):
    """Band and power columns are the reflectance and its powers."""
    matrix = evaluate_features(table, [parse_feature("B2"), parse_feature("(B3)^2")])
    np.testing.assert_allclose(matrix.column("B2"), [0.02, 0.04, 0.06])
    assert matrix.column("(B3)^2")[0] == pytest.approx(0.03**2)
    assert matrix.station_ids == ("S1", "S1", "S1")
    assert matrix.dates[0] == date(2019, 1, 1)


def test_published_chla_columns(table):
    """The CHLA preset evaluates to 11 columns."""
    matrix = evaluate_features(table, parse_feature_list(PUBLISHED_SELECTIONS[ParameterId.CHLA]))
    assert matrix.values.shape == (3, 11)
    assert matrix.names[0] == "B2"


def test_all_candidates_evaluate(table):
    """Evaluating every candidate yields a NaN-free 136-column matrix."""
    matrix = evaluate_features(table, enumerate_candidates())
    assert matrix.values.shape == (3, 136)
    assert not np.isnan(matrix.values).any()


def test_undefined_values_become_zero_and_are_counted(make_record):
    """A zero denominator yields 0 in the matrix and a count of undefined values."""
    reflectance = {band: 0.02 for band in BAND_ORDER}
    reflectance[BandId.B2] = 0.0
    reflectance[BandId.B3] = 0.0
    table = MatchupTable.from_records(
        [make_record(reflectance=reflectance), make_record(timestamp=date(2019, 2, 1))],
        source="memory",
        digest="0",
    )
    matrix = evaluate_features(
        table, [NormRatioFeature(first=BandId.B2, second=BandId.B3), BandFeature(band=BandId.B4)]
    )
    np.testing.assert_array_equal(matrix.column("NR(B2,B3)"), [0.0, 0.0])
    assert matrix.undefined_counts == {"NR(B2,B3)": 1, "B4": 0}


def test_overflowing_values_become_zero_and_are_counted(make_record):
    """A subnormal reflectance that overflows TB to infinity is substituted like NaN."""
    reflectance = {band: 0.02 for band in BAND_ORDER}
    reflectance[BandId.B1] = 1e-310
    table = MatchupTable.from_records(
        [make_record(reflectance=reflectance)], source="memory", digest="0"
    )
    matrix = evaluate_features(table, [parse_feature("TB(B1,B2,B3)")])
    np.testing.assert_array_equal(matrix.values, [[0.0]])
    assert matrix.undefined_counts == {"TB(B1,B2,B3)": 1}


def test_matrix_rejects_non_finite_values():
    """A FeatureMatrix holding infinity fails validation."""
    with pytest.raises(ValidationError, match="finite"):
        FeatureMatrix(
            names=("TB(B1,B2,B3)",),
            values=np.array([[np.inf]]),
            station_ids=("S1",),
            dates=(date(2019, 1, 1),),
        )


def test_duplicate_expressions_evaluated_once(table):
    """Repeated expressions produce one column and a warning."""
    with pytest.warns(UserWarning, match="B3"):
        matrix = evaluate_features(table, [parse_feature("B3"), parse_feature("B3")])
    assert matrix.names == ("B3",)


def test_empty_table_rejected():
    """An empty table has nothing to evaluate."""
    empty = MatchupTable.from_records([], source="memory", digest="0")
    with pytest.raises(AquaSeriesException) as exc_info:
        evaluate_features(empty, enumerate_candidates())
    assert exc_info.value.error_code == "EMPTY_TABLE"


def test_select_and_take_rows(table):
    """Column selection and row subsetting keep the metadata aligned."""
    matrix = evaluate_features(table, enumerate_candidates())
    subset = matrix.select(["NR(B2,B3)", "B1"]).take_rows([2, 0])
    assert subset.names == ("NR(B2,B3)", "B1")
    np.testing.assert_allclose(subset.column("B1"), [0.03, 0.01])
    assert subset.dates == (date(2019, 3, 1), date(2019, 1, 1))


def test_write_feature_matrix(table, tmp_path):
    """The export has station and date columns followed by the features."""
    matrix = evaluate_features(table, [parse_feature("B2"), parse_feature("LH(B1,B2,B3)")])
    path = write_feature_matrix(matrix, tmp_path / "features.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == 'station_id,date,B2,"LH(B1,B2,B3)"'
    assert lines[1].startswith("S1,2019-01-01,0.02,")
    assert len(lines) == 4
