import json
import subprocess
import sys

import pytest

from kgflow.cli import run

from conftest import GAMMA5_TEXT, Q_TEXT


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_normalize_zero_graph(capsys):
    code, out, _ = call(capsys, "normalize", "2 3 1 0 1 0 1 2 3")
    assert code == 0 and out.split()[2] == "0"


def test_normalize_undirected(capsys, tmp_path):
    f = tmp_path / "w.txt"
    f.write_text("5 8  12 13 14 15 23 25 34 45  1\n")
    code, out, _ = call(capsys, "normalize", "--undirected", "--input", str(f))
    assert code == 0 and out.split()[-1] == "0"


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["no-such-command"])
    assert exc.value.code == 2


def test_bad_input_exits_1(capsys):
    code, _, err = call(capsys, "normalize", "2 3 1 0 x")
    assert code == 1 and err.startswith("kgflow ")


def test_cocycles_and_exactness(capsys, tmp_path):
    code, out, _ = call(capsys, "gc", "cocycles", "--k", "6")
    assert code == 0 and "5/2" in out
    f = tmp_path / "g5.txt"
    f.write_text(GAMMA5_TEXT)
    code, out, _ = call(capsys, "gc", "is-exact", "--input", str(f))
    assert code == 0 and out.strip() == "not exact"
    code, out, _ = call(capsys, "gc", "d", "--input", str(f))
    assert code == 0 and not out.strip()


def test_gen_counts(capsys):
    code, out, _ = call(capsys, "gen", "2vec", "--k", "1")
    assert code == 0 and len(out.strip().splitlines()) == 1
    code, out, _ = call(capsys, "gen", "undirected", "--k", "6", "--e", "10", "--min-degree", "2")
    assert code == 0


def test_factor_classify_and_solve(capsys, tmp_path):
    code, out, _ = call(capsys, "factor", "classify", "--k", "2")
    assert code == 0 and out.strip() == "k=2: no solutions"
    f = tmp_path / "q.txt"
    f.write_text(Q_TEXT)
    code, out, _ = call(capsys, "factor", "solve", "--flow", str(f), "--skew")
    assert code == 0 and out.startswith("# consistent")
    assert "11 61" in out
    assert len([ln for ln in out.splitlines() if not ln.startswith("#")]) == 8


def test_eval(capsys, tmp_path):
    (tmp_path / "g").write_text("2 1 1  0 1  1\n")
    (tmp_path / "p").write_text("dim 3\n1 2 x3\n1 3 -x2\n2 3 x1\n")
    (tmp_path / "a").write_text("x1\nx2\n")
    argv = ["eval", "--graphs", str(tmp_path / "g"), "--bivector", str(tmp_path / "p"), "--args", str(tmp_path / "a")]
    code, out, _ = call(capsys, *argv)
    assert code == 0 and out.strip() == "x3"
    (tmp_path / "a").write_text("x1\n")
    code, _, err = call(capsys, *argv)
    assert code == 1 and "poisson_eval" in err


def test_output_and_manifest(capsys, tmp_path):
    out_a, out_b = tmp_path / "a.txt", tmp_path / "b.txt"
    man = tmp_path / "m.json"
    f = tmp_path / "k4.txt"
    f.write_text("4 6  12 13 14 23 24 34  1\n")
    for out in (out_a, out_b):
        code, stdout, _ = call(capsys, "--output", str(out), "--manifest", str(man), "orient", "--graph", str(f), "--skew")
        assert code == 0 and stdout == ""
    assert out_a.read_text() == out_b.read_text() != ""
    data = json.loads(man.read_text())
    assert data["subcommand"] == "orient"
    assert str(f) in data["inputs"]
    assert len(data["result"]) == 64


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "kgflow", "normalize", "2 1 1 0 1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout.strip()
