import csv
import json
import sys
from pathlib import Path

import pytest

from mosrs.cli import load_manifest, main

CHILD = str(Path(__file__).with_name("child_eval.py"))


def write_manifest(path, body):
    path.write_text(body, encoding="utf-8")
    return path


LS_MOCK = """
[space]
builtin = "ls"

[evaluator]
kind = "builtin"
name = "mock_docking"

[run]
budget = 100
seed = 0
num_candidates = 200
"""


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.reader(fh))


def test_run_writes_artifacts(tmp_path):
    m = write_manifest(tmp_path / "m.toml", LS_MOCK)
    out = tmp_path / "out"
    assert main(["run", "--manifest", str(m), "--out", str(out)]) == 0
    lines = (out / "history.jsonl").read_text().splitlines()
    assert len(lines) == 100
    recs = [json.loads(x) for x in lines]
    assert set(recs[0]["params"]) == {"seed", "sw_max_its", "sw_max_succ", "sw_max_fail"}
    rows = read_csv(out / "archive.csv")
    assert rows[0] == ["eval_index", "seed", "sw_max_its", "sw_max_succ", "sw_max_fail", "f1", "f2"]
    f1s = [float(r[-2]) for r in rows[1:]]
    assert f1s == sorted(f1s)
    summary = json.loads((out / "summary.json").read_text())
    assert summary["n_evaluations"] == 100
    assert summary["best_f1"]["f1"] <= min(f1s)
    assert summary["best_f2"]["f2"] <= min(float(r[-1]) for r in rows[1:])
    assert summary["archive_size"] == len(rows) - 1
    assert (out / "front.dat").exists() and (out / "checkpoint.json").exists()


def test_repeats_and_derived_seeds(tmp_path):
    m = write_manifest(tmp_path / "m.toml", LS_MOCK.replace("budget = 100", "budget = 12"))
    out = tmp_path / "out"
    assert main(["run", "--manifest", str(m), "--out", str(out), "--repeats", "10", "--seed", "7"]) == 0
    dirs = sorted(p for p in out.iterdir() if p.is_dir())
    assert len(dirs) == 10
    seeds = [json.loads((d / "summary.json").read_text())["seed"] for d in dirs]
    assert seeds == list(range(7, 17))


def test_budget_override(tmp_path):
    m = write_manifest(tmp_path / "m.toml", LS_MOCK)
    out = tmp_path / "out"
    assert main(["run", "--manifest", str(m), "--out", str(out), "--budget", "15"]) == 0
    assert len((out / "history.jsonl").read_text().splitlines()) == 15


def test_history_is_byte_identical_across_reruns(tmp_path):
    m = write_manifest(tmp_path / "m.toml", LS_MOCK.replace("budget = 100", "budget = 30"))
    for name in ("a", "b"):
        assert main(["run", "--manifest", str(m), "--out", str(tmp_path / name)]) == 0
    assert (tmp_path / "a" / "history.jsonl").read_bytes() == (tmp_path / "b" / "history.jsonl").read_bytes()


def test_front_reproduces_archive(tmp_path):
    m = write_manifest(tmp_path / "m.toml", LS_MOCK.replace("budget = 100", "budget = 40"))
    out = tmp_path / "out"
    assert main(["run", "--manifest", str(m), "--out", str(out)]) == 0
    again = tmp_path / "again"
    assert main(["front", str(out / "history.jsonl"), "--out", str(again)]) == 0
    assert (again / "archive.csv").read_bytes() == (out / "archive.csv").read_bytes()
    assert (again / "front.dat").read_bytes() == (out / "front.dat").read_bytes()


def history_line(i, f1, f2):
    return json.dumps(
        {"index": i, "tag": "initial", "status": "ok", "params": {"x1": 0.1 * i}, "unit": [0.1 * i],
         "f1": f1, "f2": f2, "gamma": None, "leader": None, "archive_size": 0}
    )


def test_front_examples(tmp_path):
    h = tmp_path / "history.jsonl"
    pts = [(1.0, 3.0), (3.0, 1.0), (2.0, 2.0), (4.0, 4.0)]
    h.write_text("\n".join(history_line(i, *p) for i, p in enumerate(pts)) + "\n")
    assert main(["front", str(h)]) == 0
    rows = read_csv(tmp_path / "archive.csv")
    assert len(rows) == 4  # header + 3
    assert [float(r[-2]) for r in rows[1:]] == [1.0, 2.0, 3.0]
    dat = (tmp_path / "front.dat").read_text().splitlines()
    assert dat[1:] == ["1.0 3.0", "2.0 2.0", "3.0 1.0"]

    h.write_text(history_line(0, 5.0, 5.0) + "\n")
    assert main(["front", str(h)]) == 0
    assert len(read_csv(tmp_path / "archive.csv")) == 2


def test_front_empty_history(tmp_path):
    h = tmp_path / "history.jsonl"
    h.write_text("")
    assert main(["front", str(h)]) == 2


def test_sample(tmp_path):
    out = tmp_path / "design.csv"
    assert main(["sample", "--space", "ga", "--n0", "10", "--seed", "3", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["seed", "ga_pop_size", "ga_elitism", "ga_mutation_rate", "ga_crossover_rate"]
    assert len(rows) == 11 and all(len(r) == 5 for r in rows)
    first = out.read_bytes()
    assert main(["sample", "--space", "ga", "--n0", "10", "--seed", "3", "--out", str(out)]) == 0
    assert out.read_bytes() == first
    assert main(["sample", "--space", "ga", "--n0", "1", "--out", str(out)]) == 0
    assert len(read_csv(out)) == 2


def test_sample_invalid_space(tmp_path):
    assert main(["sample", "--space", "pso", "--out", str(tmp_path / "d.csv")]) == 2


@pytest.mark.parametrize(
    "body",
    [
        "not toml [",
        '[space]\nbuiltin = "pso"\n[evaluator]\nname = "mock_docking"\n',
        '[space]\nbuiltin = "ga"\n[evaluator]\nname = "mock_docking"\n[run]\nbudget = 10\nn0 = 10\n',
        '[space]\nbuiltin = "ga"\n[evaluator]\nkind = "external"\n',
        '[space]\nbuiltin = "ga"\n[evaluator]\nname = "mock_docking"\n[run]\nbogus = 1\n',
        '[space]\nunit = 1\n[evaluator]\nname = "zdt1"\n',
        '[spaces]\nbuiltin = "ga"\n',
    ],
)
def test_invalid_manifest_exit_2(tmp_path, body):
    m = write_manifest(tmp_path / "m.toml", body)
    assert main(["run", "--manifest", str(m), "--out", str(tmp_path / "o")]) == 2
    assert not (tmp_path / "o" / "history.jsonl").exists()


def test_missing_manifest_exit_2(tmp_path):
    assert main(["run", "--manifest", str(tmp_path / "nope.toml")]) == 2


def test_inline_space_and_external_evaluator(tmp_path):
    body = f"""
[[space.params]]
name = "x1"
kind = "continuous"
lower = 0.0
upper = 1.0

[[space.params]]
name = "x2"
kind = "continuous"
lower = 0.0
upper = 1.0

[evaluator]
kind = "external"
command = [{json.dumps(sys.executable)}, {json.dumps(CHILD)}, "zdt1"]
timeout = 20

[run]
budget = 12
n0 = 4
num_candidates = 20
"""
    m = write_manifest(tmp_path / "m.toml", body)
    manifest = load_manifest(m)
    assert manifest.space.names == ["x1", "x2"]
    out = tmp_path / "out"
    assert main(["run", "--manifest", str(m), "--out", str(out)]) == 0
    recs = [json.loads(x) for x in (out / "history.jsonl").read_text().splitlines()]
    assert len(recs) == 12 and all(r["status"] == "ok" for r in recs)


def test_evaluator_abort_exit_3(tmp_path):
    body = f"""
[space]
unit = 2

[evaluator]
kind = "external"
command = [{json.dumps(sys.executable)}, {json.dumps(CHILD)}, "crash"]

[run]
budget = 10
n0 = 4
max_failures = 2
"""
    m = write_manifest(tmp_path / "m.toml", body)
    out = tmp_path / "out"
    assert main(["run", "--manifest", str(m), "--out", str(out)]) == 3
    recs = [json.loads(x) for x in (out / "history.jsonl").read_text().splitlines()]
    assert len(recs) == 3 and {r["status"] for r in recs} == {"nonzero_exit"}


def test_manifest_relative_output_dir(tmp_path):
    m = write_manifest(tmp_path / "m.toml", LS_MOCK + '\n[output]\ndir = "results"\n')
    assert load_manifest(m).out == tmp_path / "results"
