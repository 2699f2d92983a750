from .aquaseries_client import AquaSeriesClient

__all__ = ["AquaSeriesClient"]
