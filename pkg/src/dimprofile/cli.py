"""Command-line driver: ingest, analyze, query, correlate, generate, bench.

Exit codes: 0 success, 1 a global-sum relation failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import logging
import sys
import tempfile
import time
from pathlib import Path

from . import anomaly
from .assoc_array import TripleFormatError, read_triples, write_triples
from .dda import ClassifierConfig, analyze, compute_entity_stats
from .generate import MULTI_DELIM, ColumnSpec, GeneratorError, bench_corpus, generate_corpus
from .ingest import IngestConfig, IngestError, ingest, read_registry, write_registry
from .report import TimingReport, render_global_sums, render_stats_table, render_timings

EXIT_OK, EXIT_FAILED_SUMS, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("dimprofile")


class UsageError(Exception):
    pass


def registry_path(store: Path) -> Path:
    return store.with_name(store.name + ".registry")


def save_store(store, registry, path: Path) -> int:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        n = write_triples(store, fh)
    stats, _ = compute_entity_stats(store, registry)
    with open(registry_path(path), "w", encoding="utf-8", newline="\n") as fh:
        write_registry(registry, fh, stats)
    return n


def load_store(path: Path, separator: str = "|"):
    reg_path = registry_path(path)
    if not path.is_file() or not reg_path.is_file():
        raise UsageError(f"store {path} or its registry {reg_path} not found")
    try:
        with open(path, encoding="utf-8", newline="\n") as fh:
            store = read_triples(fh)
        with open(reg_path, encoding="utf-8") as fh:
            registry = read_registry(fh, separator)
    except (TripleFormatError, ValueError, UnicodeDecodeError) as exc:
        raise UsageError(f"corrupt store {path}: {exc}") from None
    return store, registry


def _ingest_config(args) -> IngestConfig:
    renames = {}
    for item in args.rename or ():
        src, sep, dst = item.partition("=")
        if not sep or not src or not dst:
            raise UsageError(f"--rename expects FIELD=ENTITY, got {item!r}")
        renames[src] = dst
    try:
        return IngestConfig(
            format=args.format,
            id_field=args.id_field,
            multi_value_delimiter=args.multi_delim,
            tokenized_fields=frozenset(args.tokenize or ()),
            key_separator=args.separator,
            entity_renames=renames,
            on_error=args.on_error,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _classifier_config(args) -> ClassifierConfig:
    try:
        return ClassifierConfig(args.tau_authority, args.tau_organization, args.vestigial_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_ingest(args, out) -> int:
    config = _ingest_config(args)
    src = Path(args.input)
    if not src.is_file():
        raise UsageError(f"input {src} not found")
    t0 = time.perf_counter()
    try:
        with open(src, "rb") as fh:
            store, registry, count = ingest(fh, config)
    except (IngestError, UnicodeDecodeError) as exc:
        raise UsageError(f"{src}: {exc}") from None
    n = save_store(store, registry, Path(args.output))
    elapsed = time.perf_counter() - t0
    print(f"records: {count}", file=out)
    print(f"triples: {n}", file=out)
    print(f"entities: {len(registry)}", file=out)
    print(f"ingest: {elapsed:.3f} s", file=out)
    return EXIT_OK


def cmd_analyze(args, out) -> int:
    config = _classifier_config(args)
    store, registry = load_store(Path(args.store), args.separator)
    report = analyze(store, registry, config)
    if args.json:
        out.write(render_stats_table(report, "json"))
    else:
        out.write(render_stats_table(report, "csv" if args.csv else "text"))
        out.write("\n")
        out.write(render_global_sums(report))
    if not report.passed:
        print("failed relations: " + ", ".join(report.global_sums.failed), file=sys.stderr)
        return EXIT_FAILED_SUMS
    return EXIT_OK


def _entity_array(store, registry, entity):
    if entity not in registry:
        known = ", ".join(registry) or "(none)"
        raise UsageError(f"unknown entity {entity!r}; known entities: {known}")
    return store.select_col_prefix(registry.prefix(entity))


def _write_findings(findings, args, out):
    if args.json:
        out.write(anomaly.findings_to_jsonl(findings))
    else:
        out.write(anomaly.findings_table(findings))


def cmd_query(args, out) -> int:
    store, registry = load_store(Path(args.store), args.separator)
    e_i = _entity_array(store, registry, args.entity)
    _write_findings(anomaly.popular_values(e_i, args.min_count, args.entity), args, out)
    return EXIT_OK


def cmd_correlate(args, out) -> int:
    store, registry = load_store(Path(args.store), args.separator)
    a = _entity_array(store, registry, args.entity_a)
    b = _entity_array(store, registry, args.entity_b)
    findings = anomaly.correlate_entities(a, b, args.min_count, (args.entity_a, args.entity_b))
    _write_findings(findings, args, out)
    return EXIT_OK


def cmd_generate(args, out) -> int:
    if args.rows < 0:
        raise UsageError("--rows must be >= 0")
    if not args.entity:
        raise UsageError("at least one --entity NAME:CLASS is required")
    config = _classifier_config(args)
    try:
        columns = [ColumnSpec.parse(e) for e in args.entity]
        text = generate_corpus(columns, args.rows, args.seed, config)
    except (GeneratorError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return EXIT_OK


def run_bench(rows: int, seed: int = 0, workdir: Path | None = None) -> TimingReport:
    """Time ingest (parse, explode, build, write store) against DDA on one corpus."""
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        tmp = Path(tmp)
        src = tmp / "corpus.csv"
        src.write_text(bench_corpus(rows, seed), encoding="utf-8")
        config = IngestConfig(format="csv", multi_value_delimiter=MULTI_DELIM)

        t0 = time.perf_counter()
        with open(src, "rb") as fh:
            store, registry, count = ingest(fh, config)
        with open(tmp / "store.tsv", "w", encoding="utf-8", newline="\n") as fh:
            write_triples(store, fh)
        ingest_seconds = time.perf_counter() - t0

        t0 = time.perf_counter()
        analyze(store, registry)
        dda_seconds = time.perf_counter() - t0
    return TimingReport(ingest_seconds, dda_seconds, count, store.nnz)


def cmd_bench(args, out) -> int:
    if args.rows < 1:
        raise UsageError("--rows must be >= 1")
    timing = run_bench(args.rows, args.seed)
    out.write(render_timings(timing, "json" if args.json else "text"))
    return EXIT_OK


def _add_ingest_flags(p):
    p.add_argument("--format", choices=("csv", "tsv", "jsonl"), default="csv")
    p.add_argument("--id-field", metavar="NAME")
    p.add_argument("--tokenize", metavar="FIELD", action="append",
                   help="split FIELD on whitespace (repeatable)")
    p.add_argument("--multi-delim", metavar="STR")
    p.add_argument("--rename", metavar="FIELD=ENTITY", action="append",
                   help="store FIELD under a different entity name (repeatable)")
    p.add_argument("--on-error", choices=("abort", "skip"), default="abort")


def _add_classifier_flags(p):
    p.add_argument("--tau-authority", type=float, default=2.0, metavar="F")
    p.add_argument("--tau-organization", type=float, default=50.0, metavar="F")
    p.add_argument("--vestigial-max", type=int, default=1, metavar="N")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dimprofile", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--separator", default="|", metavar="STR",
                        help="entity/value key separator (default '|')")

    p = sub.add_parser("ingest", parents=[common], help="explode a file into a triple store")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True, help="store path (registry goes next to it)")
    _add_ingest_flags(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("analyze", parents=[common], help="per-entity stats and structure classes")
    p.add_argument("store")
    _add_classifier_flags(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("query", parents=[common], help="popular values of one entity")
    p.add_argument("store")
    p.add_argument("entity")
    p.add_argument("--min-count", type=float, default=1, metavar="N")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("correlate", parents=[common], help="co-occurring value pairs of two entities")
    p.add_argument("store")
    p.add_argument("entity_a")
    p.add_argument("entity_b")
    p.add_argument("--min-count", type=float, default=1, metavar="N")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("generate", help="write a synthetic CSV corpus")
    p.add_argument("--entity", action="append", metavar="NAME:CLASS[:UNIQUE]")
    p.add_argument("--rows", type=int, default=1000, metavar="N")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("-o", "--output")
    _add_classifier_flags(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="time ingest against DDA on a generated corpus")
    p.add_argument("--rows", type=int, default=100_000, metavar="N")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
