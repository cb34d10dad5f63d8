"""Structural profiling of tabular and log data with sparse associative arrays."""
from .assoc_array import AssociativeArray, Triple, dumps, loads, read_triples, write_triples
from .dda import (
    ClassifierConfig,
    DdaReport,
    EntityStats,
    GlobalSums,
    StructureClass,
    analyze,
    classify,
    compute_entity_stats,
    validate_global_sums,
)
from .ingest import (
    EntityRegistry,
    IngestConfig,
    IngestError,
    Record,
    build_store,
    explode,
    ingest,
    parse_records,
)

__version__ = "0.1.0"
