"""Parse delimited or JSON-lines records and explode them into triples.

Every distinct ``(field, value)`` pair of a record becomes its own column
key ``field|value`` with value 1, so one sparse array holds the whole
dataset and each field's sub-array is the set of columns sharing a prefix.
"""
from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Mapping

import numpy as np

from .assoc_array import AssociativeArray, Triple

log = logging.getLogger(__name__)

FORMATS = ("csv", "tsv", "jsonl")
ROW_ORDINAL_WIDTH = 10


class IngestError(ValueError):
    """A record could not be parsed; ``lineno`` is 1-based in the input."""

    def __init__(self, message: str, lineno: int | None = None):
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)
        self.lineno = lineno


@dataclass(frozen=True)
class IngestConfig:
    format: str = "csv"
    id_field: str | None = None
    row_key_prefix: str = "row|"
    multi_value_delimiter: str | None = None
    tokenized_fields: frozenset[str] = frozenset()
    key_separator: str = "|"
    entity_renames: Mapping[str, str] = field(default_factory=dict)
    on_error: str = "abort"

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}, got {self.format!r}")
        if not self.key_separator:
            raise ValueError("key_separator must be non-empty")
        if self.on_error not in ("abort", "skip"):
            raise ValueError("on_error must be 'abort' or 'skip'")
        object.__setattr__(self, "tokenized_fields", frozenset(self.tokenized_fields))
        if self.id_field is not None and self.id_field in self.tokenized_fields:
            raise ValueError(f"id field {self.id_field!r} cannot also be tokenized")
        if self.multi_value_delimiter == "":
            raise ValueError("multi_value_delimiter must be non-empty when given")
        for src, dst in self.entity_renames.items():
            if self.key_separator in dst:
                raise ValueError(f"entity name {dst!r} contains the key separator")

    def entity_name(self, fieldname: str) -> str:
        return self.entity_renames.get(fieldname, fieldname)


@dataclass
class Record:
    row_key: str
    values: dict[str, list[str]]


class EntityRegistry:
    """Ordered set of entity names and their column-key prefixes."""

    def __init__(self, entities: Iterable[str] = (), separator: str = "|"):
        if not separator:
            raise ValueError("separator must be non-empty")
        self.separator = separator
        self._names: dict[str, None] = {}
        for e in entities:
            self.add(e)

    def add(self, entity: str) -> None:
        if entity in self._names:
            return
        if not entity:
            raise ValueError("entity name must be non-empty")
        if self.separator in entity:
            raise ValueError(f"entity name {entity!r} contains separator {self.separator!r}")
        self._names.setdefault(entity, None)

    def prefix(self, entity: str) -> str:
        return entity + self.separator

    @property
    def entities(self) -> list[str]:
        return list(self._names)

    def __iter__(self):
        return iter(self._names)

    def __len__(self):
        return len(self._names)

    def __contains__(self, entity):
        return entity in self._names

    def __eq__(self, other):
        if not isinstance(other, EntityRegistry):
            return NotImplemented
        return self.entities == other.entities and self.separator == other.separator

    def __repr__(self):
        return f"EntityRegistry({self.entities!r}, separator={self.separator!r})"


# ----------------------------------------------------------------------
# parsing

def _text_lines(stream) -> Iterator[str]:
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(stream)
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    if isinstance(stream, io.TextIOBase) or not hasattr(stream, "read"):
        yield from stream
        return
    # binary file-like
    yield from io.TextIOWrapper(stream, encoding="utf-8", newline="")


def _split_values(fieldname: str, raw: str, config: IngestConfig) -> list[str]:
    if fieldname in config.tokenized_fields:
        return raw.split()
    if config.multi_value_delimiter is not None:
        return raw.split(config.multi_value_delimiter)
    return [raw]


def _iter_rows(stream, config: IngestConfig) -> Iterator[tuple[int, dict[str, list[str]] | Exception]]:
    """Yield ``(lineno, fields)`` or ``(lineno, error)`` per data record."""
    lines = _text_lines(stream)
    if config.format == "jsonl":
        for lineno, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                yield lineno, IngestError(f"invalid JSON: {exc.msg}", lineno)
                continue
            if not isinstance(obj, dict):
                yield lineno, IngestError("JSON line is not an object", lineno)
                continue
            fields: dict[str, list[str]] = {}
            bad = None
            for k, v in obj.items():
                if v is None:
                    continue
                if isinstance(v, list):
                    if not all(isinstance(x, str) for x in v):
                        bad = f"field {k!r}: arrays must contain only strings"
                        break
                    fields[k] = list(v)
                elif isinstance(v, (dict, bool)):
                    bad = f"field {k!r}: unsupported value type {type(v).__name__}"
                    break
                else:
                    # numbers are kept as their JSON text
                    fields[k] = [v if isinstance(v, str) else json.dumps(v)]
            if bad:
                yield lineno, IngestError(bad, lineno)
            else:
                yield lineno, fields
        return

    if config.format == "csv":
        reader = csv.reader(lines, strict=True)
        def next_row():
            row = next(reader)
            return reader.line_num, row
    else:
        def gen():
            for lineno, line in enumerate(lines, start=1):
                yield lineno, line.rstrip("\r\n").split("\t")
        tsv = gen()
        def next_row():
            return next(tsv)

    try:
        _, header = next_row()
    except StopIteration:
        return
    except csv.Error as exc:
        yield 1, IngestError(f"malformed header: {exc}", 1)
        return
    if len(set(header)) != len(header) or any(not h for h in header):
        yield 1, IngestError("header must name every column exactly once", 1)
        return
    while True:
        try:
            lineno, row = next_row()
        except StopIteration:
            return
        except csv.Error as exc:
            lineno = reader.line_num
            yield lineno, IngestError(f"malformed CSV: {exc}", lineno)
            continue
        if not row or row == [""]:
            continue
        if len(row) != len(header):
            yield lineno, IngestError(
                f"expected {len(header)} fields, got {len(row)}", lineno
            )
            continue
        yield lineno, {h: [v] for h, v in zip(header, row)}


def parse_records(stream, config: IngestConfig | None = None,
                  registry: EntityRegistry | None = None) -> Iterator[Record]:
    """Parse ``stream`` into :class:`Record` objects, one per input record.

    ``stream`` may be a text or binary file object, ``str`` or ``bytes``.
    Row keys come from ``config.id_field`` when set, otherwise from the
    record ordinal zero-padded to 10 digits after ``config.row_key_prefix``.
    When a ``registry`` is given, every entity seen (including ones whose
    values are blank) is added to it in first-seen order.

    Malformed records raise :class:`IngestError` unless
    ``config.on_error == "skip"``, in which case they are logged and
    dropped.  A repeated id value always raises.
    """
    config = config or IngestConfig()
    seen_ids: set[str] = set()
    ordinal = 0
    renames = config.entity_renames
    tokenized = config.tokenized_fields
    multi = config.multi_value_delimiter
    for lineno, fields in _iter_rows(stream, config):
        if isinstance(fields, Exception):
            if config.on_error == "skip":
                log.warning("skipping %s", fields)
                continue
            raise fields
        ordinal += 1
        if config.id_field is not None:
            ids = fields.pop(config.id_field, None)
            if not ids or len(ids) != 1 or not ids[0]:
                err = IngestError(f"missing or blank id field {config.id_field!r}", lineno)
                if config.on_error == "skip":
                    log.warning("skipping %s", err)
                    continue
                raise err
            row_key = ids[0]
            if row_key in seen_ids:
                raise IngestError(f"duplicate id {row_key!r}", lineno)
            seen_ids.add(row_key)
        else:
            row_key = f"{config.row_key_prefix}{ordinal:0{ROW_ORDINAL_WIDTH}d}"

        values: dict[str, list[str]] = {}
        for name, raw in fields.items():
            entity = renames.get(name, name)
            if registry is not None:
                registry.add(entity)
            elif config.key_separator in entity:
                raise ValueError(f"entity name {entity!r} contains the key separator")
            if name in tokenized or multi is not None or len(raw) != 1:
                out = values.setdefault(entity, [])
                for r in raw:
                    out.extend(_split_values(name, r, config))
            elif entity in values:
                values[entity].extend(raw)
            else:
                values[entity] = raw
        yield Record(row_key, values)


def escape_value(value: str, separator: str = "|") -> str:
    if separator not in value:
        return value
    return value.replace(separator, "\\" + separator)


def unescape_value(value: str, separator: str = "|") -> str:
    return value.replace("\\" + separator, separator)


def explode(record: Record, registry: EntityRegistry | None = None,
            config: IngestConfig | None = None) -> list[Triple]:
    """Turn one record into presence triples ``(row, entity|value, 1)``.

    Blank values are dropped and repeated values collapse to one triple.
    Separator characters inside values are escaped as ``\\|``.
    """
    sep = config.key_separator if config is not None else (
        registry.separator if registry is not None else "|")
    return [Triple(record.row_key, col, 1) for col in _exploded_cols(record, registry, sep)]


def _exploded_cols(record: Record, registry: EntityRegistry | None, sep: str) -> list[str]:
    cols = []
    for entity, vals in record.values.items():
        if registry is not None:
            registry.add(entity)
        prefix = entity + sep
        if len(vals) == 1:
            v = vals[0]
            if v:
                cols.append(prefix + (v if sep not in v else escape_value(v, sep)))
            continue
        seen = set()
        for v in vals:
            if not v or v in seen:
                continue
            seen.add(v)
            cols.append(prefix + (v if sep not in v else escape_value(v, sep)))
    return cols


def build_store(records: Iterable[Record], config: IngestConfig | None = None,
                registry: EntityRegistry | None = None
                ) -> tuple[AssociativeArray, EntityRegistry]:
    """Explode ``records`` and collapse them into one associative array.

    Returns the store and the registry of entities in first-seen order.
    """
    config = config or IngestConfig()
    if registry is None:
        registry = EntityRegistry(separator=config.key_separator)
    rows: list[str] = []
    cols: list[str] = []
    sep = config.key_separator
    for rec in records:
        c = _exploded_cols(rec, registry, sep)
        cols.extend(c)
        rows.extend([rec.row_key] * len(c))
    if not rows:
        return AssociativeArray.empty(), registry
    store = AssociativeArray.from_arrays(rows, cols, np.ones(len(rows)))
    return store, registry


def ingest(stream, config: IngestConfig | None = None
           ) -> tuple[AssociativeArray, EntityRegistry, int]:
    """Parse and build in one pass. Returns ``(store, registry, record_count)``."""
    config = config or IngestConfig()
    registry = EntityRegistry(separator=config.key_separator)
    count = 0

    def counted():
        nonlocal count
        for rec in parse_records(stream, config, registry):
            count += 1
            yield rec

    store, registry = build_store(counted(), config, registry)
    return store, registry, count


def entity_subarrays(store: AssociativeArray, registry: EntityRegistry
                     ) -> dict[str, AssociativeArray]:
    return {e: store.select_col_prefix(registry.prefix(e)) for e in registry}


# ----------------------------------------------------------------------
# registry sidecar: entity<TAB>N_i<TAB>M_i<TAB>V_i

def write_registry(registry: EntityRegistry, fh: IO[str], stats=None) -> None:
    """Write one line per entity; counts come from ``stats`` (zeros if absent)."""
    by_name = {s.entity: s for s in (stats or ())}
    for e in registry:
        s = by_name.get(e)
        n, m, v = (s.n_rows, s.n_cols, s.nnz) if s else (0, 0, 0)
        fh.write(f"{e}\t{n}\t{m}\t{v}\n")


def read_registry(fh: IO[str], separator: str = "|") -> EntityRegistry:
    reg = EntityRegistry(separator=separator)
    for lineno, line in enumerate(fh, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValueError(f"registry line {lineno}: expected 4 fields")
        reg.add(parts[0])
    return reg
