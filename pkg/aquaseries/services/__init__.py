from .matchup import MatchupService
from .modeling import ModelingService
from .reporting import ReportingService

__all__ = [
    "MatchupService",
    "ModelingService",
    "ReportingService",
]
