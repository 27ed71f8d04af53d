import json
import subprocess
import sys

import pytest

from orbitreg.acceptance import GOLDEN
from orbitreg.cli import main
from orbitreg.formats import format_dfa

from conftest import table

FIB = "lrs 2\na 1 1\nb 1 1\n"


@pytest.fixture
def files(tmp_path):
    (tmp_path / "fib.lrs").write_text(FIB)
    (tmp_path / "all.dfa").write_text(format_dfa(table(((0, 0, 0),), {0})))
    return tmp_path


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def manifest_of(err):
    line = next(x for x in err.splitlines() if x.startswith("manifest "))
    return json.loads(line[len("manifest ") :])


def test_lrs_eval_example(files, capsys):
    code, out, err = run(["lrs", "eval", files / "fib.lrs", 10], capsys)
    assert code == 0 and out.split() == ["55"]
    m = manifest_of(err)
    assert m["exit"] == 0 and m["inputs"]


def test_filter_check_example(capsys):
    code, out, _ = run(["filter", "check", "pb", "#0#1#"], capsys)
    assert code == 0 and out.strip() == "yes"
    code, out, _ = run(["filter", "check", "pb", "#0#0#"], capsys)
    assert code == 1 and out.strip() == "no"


def test_decide_sur_example(files, capsys):
    code, out, _ = run(["decide", "sur", files / "all.dfa"], capsys)
    assert code == 0
    assert "verdict yes" in out and "witness #0#1#" in out


@pytest.mark.parametrize("name,dfa,sur,inj", GOLDEN, ids=[g[0] for g in GOLDEN])
def test_golden_exit_codes(tmp_path, capsys, name, dfa, sur, inj):
    path = tmp_path / "g.dfa"
    path.write_text(format_dfa(dfa))
    for kind, want in (("sur", sur), ("inj", inj)):
        code, out, _ = run(["decide", kind, path, "--witness-rank", 0], capsys)
        assert code == (0 if want == "yes" else 1)
        assert f"verdict {want}" in out


def test_usage_errors_exit_64(files, capsys):
    assert run(["lrs", "eval"], capsys)[0] == 64
    assert run(["nosuch"], capsys)[0] == 64
    assert run(["lrs", "eval", files / "missing.lrs", 3], capsys)[0] == 64
    (files / "bad.lrs").write_text("lrs 2\na 1\n")
    code, _, err = run(["lrs", "eval", files / "bad.lrs", 3], capsys)
    assert code == 64 and "line" in err


def test_mandatory_bounds(files, capsys):
    assert run(["filter", "brute", files / "all.dfa", "--max-rank", 2], capsys)[0] == 64
    code, out, _ = run(["filter", "brute", files / "all.dfa", "--max-rank", 2, "--budget", 64], capsys)
    assert code == 0 and "#0#1#" in out


def test_unknown_exits_2(files, capsys):
    (files / "none.dfa").write_text(format_dfa(table(((0, 0, 0),), set())))
    code, _, _ = run(["filter", "brute", files / "none.dfa", "--max-rank", 2, "--budget", 64], capsys)
    assert code == 2


def test_jsonl_matches_text(files, capsys):
    _, text, _ = run(["lrs", "scale", files / "fib.lrs"], capsys)
    _, jl, _ = run(["lrs", "scale", files / "fib.lrs", "--format", "jsonl"], capsys)
    rows = [json.loads(x) for x in jl.splitlines()]
    flat = [" ".join(([] if r["field"] == "value" else [r["field"]]) + r["values"]) for r in rows]
    assert [x for x in flat if not x.startswith("comment")] == [x for x in text.splitlines() if not x.startswith("%")]


def test_manifest_replay(files, capsys):
    man = files / "run.json"
    out = files / "out.txt"
    code, _, _ = run(["lrs", "eval", files / "fib.lrs", 12, "-o", out, "--manifest", man], capsys)
    assert code == 0
    first = man.read_text()
    m = json.loads(first)
    assert "--manifest" not in m["command"]
    code, stdout, _ = run(["replay", man], capsys)
    assert code == 0 and "identical" in stdout
    assert json.loads(man.read_text()) == m
    out.write_text("tampered\n")
    # replay rewrites the output and compares digests with the manifest
    code, stdout, _ = run(["replay", man], capsys)
    assert code == 0


def test_replay_detects_changed_input(files, capsys):
    man = files / "run.json"
    run(["lrs", "eval", files / "fib.lrs", 5, "--manifest", man], capsys)
    (files / "fib.lrs").write_text("lrs 1\na 2\nb 1\n")
    code, stdout, _ = run(["replay", man], capsys)
    assert code == 1


def test_thread_count_does_not_change_output(files, capsys):
    _, one, _ = run(["decide", "inj", files / "all.dfa", "--threads", 1], capsys)
    _, four, _ = run(["decide", "inj", files / "all.dfa", "--threads", 4], capsys)
    assert one == four


def test_plots(files, capsys):
    png = files / "s.png"
    code, _, _ = run(["lrs", "eval", files / "fib.lrs", 8, "--plot", png], capsys)
    assert code == 0 and png.read_bytes()[:4] == b"\x89PNG"


def test_zurc_witness(tmp_path, capsys):
    path = tmp_path / "m.txt"
    path.write_text("mat 2 2\n1 1\n0 1\nmat 2 2\n1 -1\n0 1\n")
    assert run(["reduce", "zurc-to-pepe", path, "--witness", "1,2"], capsys)[0] == 0
    assert run(["reduce", "zurc-to-pepe", path, "--witness", "1,1"], capsys)[0] == 1


def test_verify_subset(capsys):
    code, out, _ = run(["verify", "1,2"], capsys)
    assert code == 0 and out.count("PASS") == 2


def test_console_module_entry(files):
    r = subprocess.run([sys.executable, "-m", "orbitreg.cli", "lrs", "eval", str(files / "fib.lrs"), "7"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.split() == ["13"]
