"""Error handling for the aquaseries pipeline using Pydantic.

This module defines the AquaSeriesError and AquaSeriesException classes. Every failure
raised by the library carries a category that decides the CLI exit code.
"""

from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field


class ErrorCategory(str, Enum):
    """Failure families, each mapped to one process exit code."""

    CONFIG = "config"
    DATA = "data"
    TRAINING = "training"


EXIT_CODES: Dict[ErrorCategory, int] = {
    ErrorCategory.CONFIG: 2,
    ErrorCategory.DATA: 3,
    ErrorCategory.TRAINING: 4,
}


class AquaSeriesError(BaseModel):
    """Error container for pipeline failures."""

    error_code: Optional[str] = Field(default=None)
    error_message: Optional[str] = Field(default=None)
    category: ErrorCategory = Field(default=ErrorCategory.DATA)
    stage: Optional[str] = Field(default=None)
    details: Optional[Dict[str, Any]] = Field(default=None)

    def __str__(self) -> str:
        parts = []
        if self.stage:
            parts.append(f"Stage: {self.stage}")
        if self.error_code:
            parts.append(f"Error Code: {self.error_code}")
        if self.error_message:
            parts.append(f"Message: {self.error_message}")
        if not parts:
            parts.append("Unknown aquaseries error")
        return " | ".join(parts)


class AquaSeriesException(Exception):
    """Exception raised by every aquaseries stage."""

    def __init__(self, error: AquaSeriesError):
        """Initialize the AquaSeriesException with an AquaSeriesError."""
        self.error = error
        super().__init__(str(error))

    @property
    def error_code(self) -> Optional[str]:
        """Returns the error code of the wrapped error."""
        return self.error.error_code

    @property
    def category(self) -> ErrorCategory:
        """Returns the failure category of the wrapped error."""
        return self.error.category

    @property
    def stage(self) -> Optional[str]:
        """Returns the pipeline stage the error was raised in, if known."""
        return self.error.stage

    @property
    def exit_code(self) -> int:
        """Returns the process exit code for this failure."""
        return EXIT_CODES[self.error.category]

    def with_stage(self, stage: str) -> "AquaSeriesException":
        """Return a copy of this exception tagged with the failing stage."""
        return AquaSeriesException(self.error.model_copy(update={"stage": stage}))
