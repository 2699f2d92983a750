from .schemas import (
    BAND_ORDER,
    BAND_WAVELENGTHS_NM,
    EXCLUDED_BANDS,
    MATCHUP_COLUMNS,
    BandId,
    IngestPolicy,
    MatchupRecord,
    MatchupTable,
    ParameterId,
    Provenance,
    Spectrum,
)
from .matchup_table import (
    ingest_matchup_table,
    read_csv_text,
    serialize_matchup_table,
    split_by_year,
)

__all__ = [
    "BAND_ORDER",
    "BAND_WAVELENGTHS_NM",
    "EXCLUDED_BANDS",
    "MATCHUP_COLUMNS",
    "BandId",
    "IngestPolicy",
    "MatchupRecord",
    "MatchupTable",
    "ParameterId",
    "Provenance",
    "Spectrum",
    "ingest_matchup_table",
    "read_csv_text",
    "serialize_matchup_table",
    "split_by_year",
]
