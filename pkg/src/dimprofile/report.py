"""Text, CSV and JSON rendering of DDA reports and phase timings.

Text tables use plain ASCII pipes and dashes and print numbers without
thousands separators, so outputs diff cleanly::

    | Entity | N_i     | V_i     | M_i     | Structure Type |
    |--------|---------|---------|---------|----------------|
    | latlon | 1624984 | 1625197 | 1506465 | Identity       |
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources

from .dda import DdaReport, EntityStats, StructureClass

STATS_COLUMNS = ["Entity", "N_i", "V_i", "M_i", "Structure Type"]
MODES = ("text", "json", "csv")


def load_schema(name: str) -> dict:
    """JSON schema shipped with the package: ``"dda_report"`` or ``"finding"``."""
    path = resources.files("dimprofile") / "schemas" / f"{name}.schema.json"
    return json.loads(path.read_text(encoding="utf-8"))


def ascii_table(header, rows, numeric=frozenset()) -> str:
    """Pipe table; cells of columns in ``numeric`` are right-aligned, headers never."""
    widths = [len(h) for h in header]
    for row in rows:
        for j, cell in enumerate(row):
            widths[j] = max(widths[j], len(cell))

    def line(cells, align=numeric):
        parts = []
        for j, cell in enumerate(cells):
            parts.append(cell.rjust(widths[j]) if j in align else cell.ljust(widths[j]))
        return "| " + " | ".join(parts) + " |\n"

    out = [line(header, ()), "|" + "|".join("-" * (w + 2) for w in widths) + "|\n"]
    out.extend(line(r) for r in rows)
    return "".join(out)


def _stats_rows(report: DdaReport):
    return [[s.entity, str(s.n_rows), str(s.nnz), str(s.n_cols), c.table_label]
            for s, c in report.rows()]


def render_stats_table(report: DdaReport, mode: str = "text") -> str:
    if mode == "text":
        return ascii_table(STATS_COLUMNS, _stats_rows(report), numeric={1, 2, 3})
    if mode == "json":
        return report.to_json() + "\n"
    if mode == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(STATS_COLUMNS)
        w.writerows(_stats_rows(report))
        return buf.getvalue()
    raise ValueError(f"mode must be one of {MODES}")


def parse_stats_csv(text: str) -> list[tuple[EntityStats, StructureClass]]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != STATS_COLUMNS:
        raise ValueError(f"unexpected header {header!r}")
    out = []
    for entity, n, v, m, label in reader:
        out.append((EntityStats(entity, int(n), int(m), int(v)), StructureClass.parse(label)))
    return out


def render_global_sums(report: DdaReport) -> str:
    g = report.global_sums
    if g is None:
        return "global sums: not computed\n"
    lines = [
        f"N = {g.N}, sum N_i = {g.sum_n}",
        f"M = {g.M}, sum M_i = {g.sum_m}",
        f"V = {g.V}, sum V_i = {g.sum_v}",
    ]
    lines += [f"{name}: {'pass' if ok else 'FAIL'}" for name, ok in g.checks.items()]
    if report.skipped:
        lines.append("skipped (no rows): " + ", ".join(report.skipped))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TimingReport:
    ingest_seconds: float
    dda_seconds: float
    record_count: int
    triple_count: int

    def __post_init__(self):
        if self.ingest_seconds < 0 or self.dda_seconds < 0:
            raise ValueError("durations must be non-negative")

    @property
    def ratio(self) -> float | None:
        """DDA time as a fraction of ingest time; None when ingest took no time."""
        if self.ingest_seconds > 0:
            return self.dda_seconds / self.ingest_seconds
        return None

    @staticmethod
    def _rate(count, seconds):
        return count / seconds if seconds > 0 and count > 0 else None

    @property
    def ingest_throughput(self) -> float | None:
        return self._rate(self.record_count, self.ingest_seconds)

    @property
    def dda_throughput(self) -> float | None:
        return self._rate(self.record_count, self.dda_seconds)

    def to_dict(self) -> dict:
        d = {
            "ingest_seconds": round(self.ingest_seconds, 3),
            "dda_seconds": round(self.dda_seconds, 3),
            "record_count": self.record_count,
            "triple_count": self.triple_count,
            "ingest_records_per_second": _round(self.ingest_throughput),
            "dda_records_per_second": _round(self.dda_throughput),
        }
        if self.record_count > 0 and self.ratio is not None:
            d["ratio"] = round(self.ratio, 6)
        return d


def _round(x, nd=1):
    return None if x is None else round(x, nd)


def render_timings(t: TimingReport, mode: str = "text") -> str:
    d = t.to_dict()
    if mode == "json":
        return json.dumps(d, indent=2) + "\n"
    if mode != "text":
        raise ValueError("mode must be 'text' or 'json'")
    lines = [
        f"records: {t.record_count}",
        f"triples: {t.triple_count}",
        f"ingest: {t.ingest_seconds:.3f} s"
        + (f" ({d['ingest_records_per_second']:.1f} records/s)" if d["ingest_records_per_second"] else ""),
        f"dda:    {t.dda_seconds:.3f} s"
        + (f" ({d['dda_records_per_second']:.1f} records/s)" if d["dda_records_per_second"] else ""),
    ]
    if "ratio" in d:
        lines.append(f"dda/ingest ratio: {d['ratio']:.6f}")
    return "\n".join(lines) + "\n"
