from .corpora import (INGESTERS, Corpus, CorpusSplit, ingest_aaec, ingest_abstrct, ingest_cdcp)
from .interchange import SchemaViolation, dumps_split, loads_split, read_interchange, write_interchange
from .standoff import MalformedAnnotation, MissingStance
from .stats import CorpusStats, compute_stats, target_lengths

__all__ = [
    "INGESTERS", "Corpus", "CorpusSplit", "CorpusStats", "MalformedAnnotation", "MissingStance",
    "SchemaViolation", "compute_stats", "dumps_split", "loads_split", "ingest_aaec", "ingest_abstrct", "ingest_cdcp",
    "read_interchange", "target_lengths", "write_interchange",
]
