"""Dimensional analysis: per-entity (N_i, M_i, V_i), global sums, structure classes."""
from __future__ import annotations

import enum
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .assoc_array import AssociativeArray
from .ingest import EntityRegistry


class StructureClass(str, enum.Enum):
    IDENTITY = "Identity"
    AUTHORITATIVE = "Authoritative"
    ORGANIZATIONAL = "Organizational"
    VESTIGIAL = "Vestigial"

    @property
    def table_label(self) -> str:
        """Short label used in the printed stats table."""
        return _TABLE_LABELS[self]

    @classmethod
    def parse(cls, text: str) -> "StructureClass":
        for c in cls:
            if text in (c.value, c.table_label, c.name):
                return c
        raise ValueError(f"unknown structure class {text!r}")


_TABLE_LABELS = {
    StructureClass.IDENTITY: "Identity",
    StructureClass.AUTHORITATIVE: "Authority",
    StructureClass.ORGANIZATIONAL: "Organization",
    StructureClass.VESTIGIAL: "Vestigial",
}


@dataclass(frozen=True)
class EntityStats:
    entity: str
    n_rows: int   # N_i: rows with at least one value
    n_cols: int   # M_i: unique values (column keys)
    nnz: int      # V_i: stored entries

    def __post_init__(self):
        if min(self.n_rows, self.n_cols, self.nnz) < 0:
            raise ValueError("counts must be non-negative")


@dataclass(frozen=True)
class ClassifierConfig:
    """Ratio thresholds that turn "significantly smaller/greater" into rules.

    The defaults reproduce every structure type of the two published
    tables: an entity is Authoritative at M/N >= 2 and Organizational at
    N/M >= 50, with Vestigial reserved for at most one unique value.
    """
    tau_authority: float = 2.0
    tau_organization: float = 50.0
    vestigial_max_unique: int = 1

    def __post_init__(self):
        if not self.tau_authority > 1:
            raise ValueError("tau_authority must be > 1")
        if not self.tau_organization > 1:
            raise ValueError("tau_organization must be > 1")
        if self.vestigial_max_unique < 1:
            raise ValueError("vestigial_max_unique must be >= 1")


def classify(stats: EntityStats, config: ClassifierConfig | None = None) -> StructureClass:
    """Assign exactly one structure class; rules are tried in order.

    Ties at a threshold go to the special class.
    """
    config = config or ClassifierConfig()
    n, m = stats.n_rows, stats.n_cols
    if m <= config.vestigial_max_unique:
        return StructureClass.VESTIGIAL
    if n == 0 or m / n >= config.tau_authority:
        return StructureClass.AUTHORITATIVE
    if n / m >= config.tau_organization:
        return StructureClass.ORGANIZATIONAL
    return StructureClass.IDENTITY


def compute_entity_stats(store: AssociativeArray, registry: EntityRegistry
                         ) -> tuple[list[EntityStats], list[str]]:
    """Count rows, unique columns and entries of every entity's sub-array.

    Returns ``(stats, skipped)``; entities with no rows are skipped and
    listed by name, in registry order.
    """
    stats, skipped = [], []
    if not store:
        return stats, list(registry)
    csc = store._col_major()
    for entity in registry:
        lo, hi = store.col_prefix_range(registry.prefix(entity))
        if lo == hi:
            skipped.append(entity)
            continue
        start, stop = csc.indptr[lo], csc.indptr[hi]
        rows = csc.indices[start:stop]
        n_rows = int(np.count_nonzero(np.bincount(rows, minlength=store.num_rows)))
        stats.append(EntityStats(entity, n_rows, hi - lo, int(stop - start)))
    return stats, skipped


@dataclass(frozen=True)
class GlobalSums:
    N: int
    M: int
    V: int
    sum_n: int
    sum_m: int
    sum_v: int

    @property
    def checks(self) -> dict[str, bool]:
        return {
            "N <= sum N_i": self.N <= self.sum_n,
            "M == sum M_i": self.M == self.sum_m,
            "V == sum V_i": self.V == self.sum_v,
        }

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def failed(self) -> list[str]:
        return [name for name, ok in self.checks.items() if not ok]

    def to_dict(self) -> dict:
        return {
            "N": self.N, "M": self.M, "V": self.V,
            "sum_N_i": self.sum_n, "sum_M_i": self.sum_m, "sum_V_i": self.sum_v,
            "checks": self.checks,
        }


def validate_global_sums(store: AssociativeArray, stats) -> GlobalSums:
    return GlobalSums(
        N=store.num_rows, M=store.num_cols, V=store.nnz,
        sum_n=sum(s.n_rows for s in stats),
        sum_m=sum(s.n_cols for s in stats),
        sum_v=sum(s.nnz for s in stats),
    )


@dataclass
class DdaReport:
    stats: list[EntityStats]
    classes: list[StructureClass]
    global_sums: GlobalSums | None
    skipped: list[str] = field(default_factory=list)
    dda_seconds: float | None = None

    @property
    def passed(self) -> bool:
        return self.global_sums is None or self.global_sums.passed

    def rows(self):
        return zip(self.stats, self.classes)

    def to_dict(self, timings: bool = True) -> dict:
        out = {
            "entities": [
                {"entity": s.entity, "N_i": s.n_rows, "V_i": s.nnz, "M_i": s.n_cols,
                 "structure": c.value}
                for s, c in self.rows()
            ],
            "globalSums": self.global_sums.to_dict() if self.global_sums else None,
            "skipped": list(self.skipped),
        }
        if timings:
            out["durations"] = {"dda_seconds": self.dda_seconds}
        return out

    def to_json(self, timings: bool = True) -> str:
        return json.dumps(self.to_dict(timings), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "DdaReport":
        stats = [EntityStats(e["entity"], e["N_i"], e["M_i"], e["V_i"]) for e in d["entities"]]
        classes = [StructureClass(e["structure"]) for e in d["entities"]]
        g = d["globalSums"]
        sums = None
        if g is not None:
            sums = GlobalSums(g["N"], g["M"], g["V"], g["sum_N_i"], g["sum_M_i"], g["sum_V_i"])
        secs = (d.get("durations") or {}).get("dda_seconds")
        return cls(stats, classes, sums, list(d.get("skipped", [])), secs)

    @classmethod
    def from_json(cls, text: str) -> "DdaReport":
        return cls.from_dict(json.loads(text))


def report_from_stats(stats, config: ClassifierConfig | None = None) -> DdaReport:
    """Classify precomputed stats (e.g. published tables) without a store."""
    stats = list(stats)
    return DdaReport(stats, [classify(s, config) for s in stats], None)


def analyze(store: AssociativeArray, registry: EntityRegistry,
            config: ClassifierConfig | None = None) -> DdaReport:
    t0 = time.perf_counter()
    stats, skipped = compute_entity_stats(store, registry)
    sums = validate_global_sums(store, stats)
    classes = [classify(s, config) for s in stats]
    elapsed = time.perf_counter() - t0
    return DdaReport(stats, classes, sums, skipped, elapsed)
