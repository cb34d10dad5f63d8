import io
import json
from pathlib import Path

import pytest

from dimprofile.assoc_array import AssociativeArray, write_triples
from dimprofile.cli import main, registry_path, run_bench, save_store
from dimprofile.dda import StructureClass
from dimprofile.generate import MULTI_DELIM
from dimprofile.ingest import EntityRegistry
from paper_tables import POPULAR_USERS, TWEETS

FIXTURES = Path(__file__).parent / "fixtures"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


@pytest.fixture
def store_path(tmp_path):
    return tmp_path / "store.tsv"


def test_ingest_empty_file(tmp_path, store_path):
    src = tmp_path / "empty.csv"
    src.write_text("")
    code, out = run("ingest", src, "-o", store_path)
    assert code == 0
    assert store_path.read_text() == ""
    assert "records: 0" in out


def test_ingest_golden(store_path):
    code, _ = run("ingest", FIXTURES / "three_lines.csv", "-o", store_path,
                  "--tokenize", "text", "--rename", "text=word")
    assert code == 0
    assert store_path.read_bytes() == (FIXTURES / "three_lines.store.tsv").read_bytes()
    assert (registry_path(store_path).read_bytes()
            == (FIXTURES / "three_lines.store.tsv.registry").read_bytes())


def test_ingest_malformed_aborts(tmp_path, store_path, capsys):
    src = tmp_path / "bad.csv"
    src.write_text("a,b\n1,2\n3,4,5\n")
    code, _ = run("ingest", src, "-o", store_path)
    assert code == 2
    assert "line 3" in capsys.readouterr().err
    assert not store_path.exists()
    code, out = run("ingest", src, "-o", store_path, "--on-error", "skip")
    assert code == 0 and "records: 1" in out


@pytest.mark.parametrize("argv", [
    ["ingest", "missing.csv", "-o", "x.tsv"],
    ["ingest", "in.csv", "-o", "x.tsv", "--id-field", "a", "--tokenize", "a"],
    ["ingest", "in.csv", "-o", "x.tsv", "--separator", ""],
    ["analyze", "nowhere.tsv"],
    ["analyze", "x.tsv", "--tau-authority", "0.5"],
    ["bogus"],
])
def test_usage_errors(tmp_path, monkeypatch, argv):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "in.csv").write_text("a,b\n1,2\n")
    assert run(*argv)[0] == 2


def test_analyze_corrupt_store(store_path):
    store_path.write_text("only\ttwo\n")
    registry_path(store_path).write_text("a\t0\t0\t0\n")
    assert run("analyze", store_path)[0] == 2


def test_analyze_golden(capsys):
    code, out = run("analyze", FIXTURES / "three_lines.store.tsv")
    assert code == 0
    assert "| word   |   2 |   4 |   4 | Authority      |" in out
    assert "V == sum V_i: pass" in out
    code, out = run("analyze", FIXTURES / "three_lines.store.tsv", "--json")
    doc = json.loads(out)
    assert [e["entity"] for e in doc["entities"]] == ["user", "time", "word"]


def test_analyze_empty_store(tmp_path, store_path):
    src = tmp_path / "empty.csv"
    src.write_text("")
    run("ingest", src, "-o", store_path)
    code, out = run("analyze", store_path)
    assert code == 0
    assert out.startswith("| Entity | N_i | V_i | M_i | Structure Type |\n|---")


def test_analyze_fault_injected(store_path, capsys):
    store = AssociativeArray.from_triples([("r1", "a|x", 1), ("r1", "zz|y", 1)])
    save_store(store, EntityRegistry(["a"]), store_path)
    code, _ = run("analyze", store_path)
    assert code == 1
    assert "M == sum M_i" in capsys.readouterr().err


def table_one_store(path, scale=1000):
    """Store with Table I's entity names whose class pattern matches the table.

    Counts are scaled down by ``scale`` (ratios preserved approximately).
    """
    rows, cols = [], []
    for entity, n, v, m, _ in TWEETS:
        n, m, v = max(1, n // scale), max(2, m // scale), max(1, v // scale)
        per_row = max(1, v // n)
        k = 0
        for r in range(n):
            for _ in range(per_row):
                rows.append(f"row|{r:010d}")
                cols.append(f"{entity}|{k % m}")
                k += 1
        # make sure all m values appear
        for j in range(k, m):
            rows.append(f"row|{j % n:010d}")
            cols.append(f"{entity}|{j}")
    store = AssociativeArray.from_arrays(rows, cols)
    save_store(store, EntityRegistry([t[0] for t in TWEETS]), path)


def test_analyze_table_one_fixture(store_path):
    table_one_store(store_path)
    code, out = run("analyze", store_path, "--json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["entities"]) == 10
    got = [StructureClass(e["structure"]).table_label for e in doc["entities"]]
    assert got == [t[4] for t in TWEETS]


def user_store(path):
    rows, cols, n = [], [], 0
    counts = dict(POPULAR_USERS)
    counts.update({f"user|u{i:03d}": 1 + (i * 37) % 150 for i in range(100)})
    for user, k in counts.items():
        for _ in range(k):
            n += 1
            rows.append(f"row|{n:010d}")
            cols.append(user)
    save_store(AssociativeArray.from_arrays(rows, cols), EntityRegistry(["user"]), path)


def test_query(store_path, capsys):
    user_store(store_path)
    code, out = run("query", store_path, "user", "--min-count", 150, "--json")
    assert code == 0
    got = [json.loads(line) for line in out.splitlines()]
    assert [(f["subject"], f["count"]) for f in got] == sorted(
        POPULAR_USERS.items(), key=lambda kv: -kv[1])
    code, out = run("query", store_path, "user", "--min-count", 150)
    assert "| PopularValue | user   | user|verkehr_bw      |   300 |" in out
    code, _ = run("query", store_path, "nobody")
    assert code == 2
    assert "known entities: user" in capsys.readouterr().err


def test_query_empty_result(store_path):
    user_store(store_path)
    code, out = run("query", store_path, "user", "--min-count", 10_000, "--json")
    assert code == 0 and out == ""


def test_correlate(tmp_path, store_path):
    src = tmp_path / "c.csv"
    src.write_text("user,job\n" + "a,x\n" * 10 + "b,y\n")
    run("ingest", src, "-o", store_path)
    code, out = run("correlate", store_path, "user", "job", "--min-count", 1, "--json")
    assert code == 0
    assert [json.loads(line) for line in out.splitlines()] == [
        {"kind": "CrossEntityPair", "entity": ["user", "job"],
         "subject": ["user|a", "job|x"], "count": 10}]
    assert run("correlate", store_path, "user", "nope")[0] == 2


def test_generate_header_only():
    code, out = run("generate", "--entity", "id:Identity", "--entity", "t:Vestigial",
                    "--rows", 0)
    assert code == 0 and out == "id,t\n"


def test_generate_closed_loop(tmp_path, store_path):
    corpus = tmp_path / "g.csv"
    code, _ = run("generate", "--rows", 1000, "--seed", 7, "-o", corpus,
                  "--entity", "id:Identity", "--entity", "word:Authoritative",
                  "--entity", "time:Organizational", "--entity", "acct:Vestigial")
    assert code == 0
    run("ingest", corpus, "-o", store_path, "--multi-delim", MULTI_DELIM)
    code, out = run("analyze", store_path, "--json")
    got = {e["entity"]: e["structure"] for e in json.loads(out)["entities"]}
    assert got == {"id": "Identity", "word": "Authoritative",
                   "time": "Organizational", "acct": "Vestigial"}


def test_generate_deterministic(tmp_path):
    argv = ["generate", "--rows", 500, "--seed", 3, "--entity", "a:Identity",
            "--entity", "b:Organizational", "--entity", "c:Authoritative"]
    assert run(*argv)[1] == run(*argv)[1]
    assert run(*argv)[1] != run(*argv[:4], 4, *argv[5:])[1]


@pytest.mark.parametrize("spec", ["w:Authoritative:1", "t:Organizational", "x:Vestigial:5",
                                  "bad", "y:Nonsense"])
def test_generate_contradictions(spec):
    assert run("generate", "--rows", 40, "--entity", spec)[0] == 2


def test_bench_small():
    code, out = run("bench", "--rows", 1, "--json")
    assert code == 0
    d = json.loads(out)
    assert d["record_count"] == 1
    assert d["ingest_seconds"] >= 0 and d["dda_seconds"] >= 0
    assert run("bench", "--rows", 0)[0] == 2


def test_bench_deterministic_counts():
    a, b = run_bench(2000, seed=5), run_bench(2000, seed=5)
    assert (a.record_count, a.triple_count) == (b.record_count, b.triple_count)


def test_module_entry_point(tmp_path):
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "dimprofile", "generate", "--rows", "2",
                          "--entity", "a:Vestigial"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout == "a\na0\na0\n"


def test_store_writer_matches_cli(tmp_path):
    store = AssociativeArray.from_triples([("r", "a|1", 1)])
    buf = io.StringIO()
    write_triples(store, buf)
    save_store(store, EntityRegistry(["a"]), tmp_path / "s.tsv")
    assert (tmp_path / "s.tsv").read_text() == buf.getvalue()
