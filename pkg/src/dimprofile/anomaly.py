"""Per-class highlight queries over entity sub-arrays.

Each query returns a list of :class:`Finding` objects sorted by count
(descending), then by subject.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable

from .assoc_array import AssociativeArray, format_value
from .dda import DdaReport, StructureClass
from .ingest import EntityRegistry


class FindingKind(str, enum.Enum):
    POPULAR_VALUE = "PopularValue"
    DUPLICATE_VALUE_ACROSS_ROWS = "DuplicateValueAcrossRows"
    MULTI_VALUED_ROW = "MultiValuedRow"
    CROSS_ENTITY_PAIR = "CrossEntityPair"
    VESTIGIAL_VALUE = "VestigialValue"


@dataclass(frozen=True)
class Finding:
    entity: str | tuple[str, str]
    kind: FindingKind
    subject: str | tuple[str, str]
    count: float

    def to_dict(self) -> dict:
        c = self.count
        return {
            "kind": self.kind.value,
            "entity": list(self.entity) if isinstance(self.entity, tuple) else self.entity,
            "subject": list(self.subject) if isinstance(self.subject, tuple) else self.subject,
            "count": int(c) if float(c).is_integer() else c,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Finding":
        def tup(x):
            return tuple(x) if isinstance(x, list) else x
        return cls(tup(d["entity"]), FindingKind(d["kind"]), tup(d["subject"]), d["count"])


def _sorted(findings: list[Finding]) -> list[Finding]:
    return sorted(findings, key=lambda f: (-f.count, f.subject))


def popular_values(e_i: AssociativeArray, min_count: float = 1, entity: str = "") -> list[Finding]:
    """Column keys whose total exceeds ``min_count`` (strictly)."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    sums = e_i.col_sums().threshold(min_count)
    return _sorted([
        Finding(entity, FindingKind.POPULAR_VALUE, t.col, t.val) for t in sums.triples()
    ])


def identity_deviations(e_i: AssociativeArray, entity: str = "") -> list[Finding]:
    """Departures from a one-to-one row/value mapping.

    A value held by more than one row is a ``DuplicateValueAcrossRows``
    finding; a row holding more than one value is a ``MultiValuedRow``
    finding.  Counts are the number of rows or values involved.  The
    result is empty exactly when every row and every column has at most
    one entry.
    """
    dup = [Finding(entity, FindingKind.DUPLICATE_VALUE_ACROSS_ROWS, k, n)
           for k, n in e_i.col_degrees().items() if n > 1]
    multi = [Finding(entity, FindingKind.MULTI_VALUED_ROW, k, n)
             for k, n in e_i.row_degrees().items() if n > 1]
    return _sorted(dup) + _sorted(multi)


def correlate_entities(e_i: AssociativeArray, e_j: AssociativeArray, min_count: float = 1,
                       entities: tuple[str, str] = ("", "")) -> list[Finding]:
    """Value pairs that co-occur in more than ``min_count`` rows.

    Computed as ``e_i.T @ e_j``; with presence-valued inputs each entry is
    the number of rows carrying both values.
    """
    c = e_i.T.multiply(e_j).threshold(min_count)
    return _sorted([
        Finding(tuple(entities), FindingKind.CROSS_ENTITY_PAIR, (t.row, t.col), t.val)
        for t in c.triples()
    ])


def vestigial_summary(e_i: AssociativeArray, entity: str = "") -> list[Finding]:
    """Census of every value of the entity with its total count."""
    return _sorted([
        Finding(entity, FindingKind.VESTIGIAL_VALUE, t.col, t.val)
        for t in e_i.col_sums().triples()
    ])


def highlight(store: AssociativeArray, registry: EntityRegistry, report: DdaReport,
              min_count: float = 1) -> list[Finding]:
    """Run the query matching each entity's structure class.

    Authoritative and Organizational entities get :func:`popular_values`,
    Identity entities :func:`identity_deviations`, and Vestigial entities
    :func:`vestigial_summary`.  Cross-entity correlation needs a pair and is
    left to :func:`correlate_entities`.
    """
    out: list[Finding] = []
    for stats, cls in report.rows():
        e_i = store.select_col_prefix(registry.prefix(stats.entity))
        if cls is StructureClass.IDENTITY:
            out.extend(identity_deviations(e_i, stats.entity))
        elif cls is StructureClass.VESTIGIAL:
            out.extend(vestigial_summary(e_i, stats.entity))
        else:
            out.extend(popular_values(e_i, min_count, stats.entity))
    return out


# ----------------------------------------------------------------------
# serialization

def findings_to_jsonl(findings: Iterable[Finding]) -> str:
    return "".join(json.dumps(f.to_dict()) + "\n" for f in findings)


def findings_from_jsonl(text: str) -> list[Finding]:
    return [Finding.from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]


def _fmt(x) -> str:
    return " / ".join(x) if isinstance(x, tuple) else x


def findings_table(findings: Iterable[Finding]) -> str:
    """Fixed-width text table in the same style as the stats table."""
    from .report import ascii_table

    rows = [[f.kind.value, _fmt(f.entity), _fmt(f.subject), format_value(f.count)]
            for f in findings]
    return ascii_table(["Kind", "Entity", "Subject", "Count"], rows, numeric={3})


__all__ = [
    "Finding", "FindingKind", "popular_values", "identity_deviations",
    "correlate_entities", "vestigial_summary", "highlight",
    "findings_to_jsonl", "findings_from_jsonl", "findings_table",
]
