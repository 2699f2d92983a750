"""Unit tests for AquaSeriesError and AquaSeriesException classes.

This module tests the error model, its string form and the exit code mapping used by the CLI.
"""

import pytest

from aquaseries.errors import (
    EXIT_CODES,
    AquaSeriesError,
    AquaSeriesException,
    ErrorCategory,
)


def test_error_str_full_fields():
    """Test that AquaSeriesError string representation includes all fields."""
    error = AquaSeriesError(
        error_code="ROW_INVALID",
        error_message="line 3: bad date",
        category=ErrorCategory.DATA,
        stage="ingest",
        details={"line": 3},
    )
    assert str(error) == "Stage: ingest | Error Code: ROW_INVALID | Message: line 3: bad date"


def test_error_str_partial_fields():
    """Test that AquaSeriesError string representation handles missing fields."""
    s = str(AquaSeriesError(error_code="E1"))
    assert "Error Code: E1" in s
    assert "Message:" not in s
    assert "Stage:" not in s


def test_error_str_no_fields():
    """Test that AquaSeriesError string representation handles no fields."""
    assert str(AquaSeriesError()) == "Unknown aquaseries error"


def test_default_category_is_data():
    """Errors without a category count as data errors."""
    assert AquaSeriesError().category == ErrorCategory.DATA


@pytest.mark.parametrize(
    "category, code",
    [
        (ErrorCategory.CONFIG, 2),
        (ErrorCategory.DATA, 3),
        (ErrorCategory.TRAINING, 4),
    ],
)
def test_exit_codes(category, code):
    """Each category maps to its process exit code."""
    exc = AquaSeriesException(AquaSeriesError(category=category))
    assert exc.exit_code == code
    assert EXIT_CODES[category] == code


def test_exception_message_and_properties():
    """Test that AquaSeriesException exposes the wrapped error."""
    error = AquaSeriesError(
        error_code="STALE_CACHE", error_message="stale", category=ErrorCategory.TRAINING
    )
    exc = AquaSeriesException(error)
    assert isinstance(exc, Exception)
    assert exc.error is error
    assert exc.error_code == "STALE_CACHE"
    assert exc.category == ErrorCategory.TRAINING
    assert exc.stage is None
    assert str(exc) == str(error)


def test_with_stage_returns_tagged_copy():
    """with_stage tags a copy and leaves the original untouched."""
    exc = AquaSeriesException(AquaSeriesError(error_code="EMPTY_PARTITION"))
    tagged = exc.with_stage("screen")
    assert tagged.stage == "screen"
    assert "Stage: screen" in str(tagged)
    assert exc.stage is None
