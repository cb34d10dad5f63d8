"""Seeded synthetic CSV corpora with a chosen structure class per column.

Authoritative columns need more unique values than rows, so each of their
cells holds several values joined by ``MULTI_DELIM``; ingest such a corpus
with ``multi_value_delimiter=MULTI_DELIM``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .dda import ClassifierConfig, StructureClass

MULTI_DELIM = ";"


class GeneratorError(ValueError):
    """The requested column cannot reach its class with the given row count."""


@dataclass(frozen=True)
class ColumnSpec:
    name: str
    target: StructureClass
    unique: int | None = None  # M_i; chosen from the class when None

    @classmethod
    def parse(cls, text: str) -> "ColumnSpec":
        """Parse ``NAME:CLASS`` or ``NAME:CLASS:UNIQUE``."""
        parts = text.split(":")
        if len(parts) not in (2, 3) or not parts[0]:
            raise GeneratorError(f"expected NAME:CLASS[:UNIQUE], got {text!r}")
        unique = int(parts[2]) if len(parts) == 3 else None
        return cls(parts[0], StructureClass.parse(parts[1]), unique)


def plan_unique(spec: ColumnSpec, rows: int, config: ClassifierConfig) -> int:
    """Number of distinct values for ``spec``; raises if the class is unreachable."""
    if rows == 0:
        return 0
    vmax = config.vestigial_max_unique
    t = spec.target
    m = spec.unique
    if m is None:
        if t is StructureClass.VESTIGIAL:
            m = 1
        elif t is StructureClass.IDENTITY:
            m = rows
        elif t is StructureClass.AUTHORITATIVE:
            m = rows * (math.ceil(config.tau_authority) + 1)
        else:
            m = max(vmax + 1, int(rows // (2 * config.tau_organization)))
    if m < 1:
        raise GeneratorError(f"{spec.name}: unique count must be >= 1")
    ok = {
        StructureClass.VESTIGIAL: m <= vmax,
        StructureClass.AUTHORITATIVE: m > vmax and m / rows >= config.tau_authority,
        StructureClass.ORGANIZATIONAL: m > vmax and m <= rows and rows / m >= config.tau_organization,
        StructureClass.IDENTITY: (m > vmax and m <= rows and m / rows < config.tau_authority
                                  and rows / m < config.tau_organization),
    }[t]
    if not ok:
        raise GeneratorError(
            f"{spec.name}: {t.value} is unreachable with {m} unique values over {rows} rows")
    return m


def _column(spec: ColumnSpec, rows: int, m: int, rng: np.random.Generator) -> list[str]:
    prefix = spec.name.replace(" ", "_").lower()
    if rows == 0:
        return []
    if m <= rows:
        # every value used at least once, the rest drawn uniformly
        idx = np.concatenate([np.arange(m), rng.integers(0, m, rows - m)])
        rng.shuffle(idx)
        return [f"{prefix}{i}" for i in idx]
    # more values than rows: spread m values over the rows, each row >= 1
    per_row = np.full(rows, m // rows)
    per_row[rng.permutation(rows)[: m % rows]] += 1
    ids = rng.permutation(m)
    cells, pos = [], 0
    for k in per_row:
        cells.append(MULTI_DELIM.join(f"{prefix}{i}" for i in ids[pos:pos + k]))
        pos += k
    return cells


def generate_corpus(columns, rows: int, seed: int = 0,
                    config: ClassifierConfig | None = None, check: bool = True) -> str:
    """Return CSV text with one column per spec and ``rows`` data lines.

    With ``check`` (the default) every column is verified to be reachable
    under ``config`` before anything is generated.
    """
    if rows < 0:
        raise GeneratorError("rows must be >= 0")
    config = config or ClassifierConfig()
    columns = [c if isinstance(c, ColumnSpec) else ColumnSpec.parse(c) for c in columns]
    names = [c.name for c in columns]
    if len(set(names)) != len(names):
        raise GeneratorError("column names must be unique")
    plans = []
    for c in columns:
        if check:
            plans.append(plan_unique(c, rows, config))
        else:
            try:
                plans.append(plan_unique(c, rows, config))
            except GeneratorError:
                plans.append(max(1, min(rows, c.unique or rows)))
    rng = np.random.default_rng(seed)
    data = [_column(c, rows, m, rng) for c, m in zip(columns, plans)]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    w.writerows(zip(*data))
    return buf.getvalue()


# Mix used by the benchmark: one column of each class plus a second identity.
BENCH_COLUMNS = (
    ColumnSpec("user", StructureClass.IDENTITY),
    ColumnSpec("time", StructureClass.ORGANIZATIONAL),
    ColumnSpec("account", StructureClass.VESTIGIAL),
    ColumnSpec("word", StructureClass.AUTHORITATIVE),
    ColumnSpec("place", StructureClass.IDENTITY),
)


def bench_corpus(rows: int, seed: int = 0) -> str:
    return generate_corpus(BENCH_COLUMNS, rows, seed, check=False)
