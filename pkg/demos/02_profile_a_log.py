"""Profile a JSON-lines log: explode it, run dimensional analysis, look at the highlights."""
import io
import json
import random

from dimprofile import IngestConfig, analyze, ingest
from dimprofile.anomaly import correlate_entities, findings_table, highlight
from dimprofile.report import render_global_sums, render_stats_table

rng = random.Random(0)
users = [f"user{i}" for i in range(40)]
lines = []
for i in range(2000):
    rec = {
        "id": f"t{i:05d}",
        "user": rng.choice(users[:5]) if rng.random() < 0.3 else rng.choice(users),
        "time": f"2024-01-01T{rng.randrange(24):02d}:00",
        "text": " ".join(f"w{rng.randrange(5000)}" for _ in range(rng.randint(3, 12))),
        "source": "web",
    }
    if rng.random() < 0.8:
        rec["lang"] = rng.choice(["en", "de", "fr"])
    lines.append(json.dumps(rec))
log = io.StringIO("\n".join(lines) + "\n")

# Free text becomes a "word" entity, one column per distinct token.
config = IngestConfig(format="jsonl", id_field="id", tokenized_fields={"text"},
                      entity_renames={"text": "word"})
store, registry, count = ingest(log, config)
print(f"{count} records -> {store.nnz} triples over {store.num_cols} columns\n")

report = analyze(store, registry)
print(render_stats_table(report))
print(render_global_sums(report))

# Each class gets its own query: heavy hitters, one-to-one breaks, value census.
print(findings_table(highlight(store, registry, report, min_count=60)[:15]))

# Which users post in which language most.
pairs = correlate_entities(store.select_col_prefix("user|"), store.select_col_prefix("lang|"),
                           min_count=40, entities=("user", "lang"))
print(findings_table(pairs))
