import json
import subprocess
import sys

import pytest

from girthforge import cli, verify
from girthforge.core import Digraph, parse_arclist, to_arclist


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def payload(out):
    rep = json.loads(out)
    rep.pop("timing")
    return rep


def test_construct_circulant(tmp_path, capsys):
    path = tmp_path / "c7.arclist"
    code, out, _ = run(capsys, "construct", "circulant", str(path), "--n", "7", "--jumps", "1,2")
    assert code == 0
    d = parse_arclist(path.read_text())
    assert d.arc_count == 14
    rep = json.loads(out)
    assert rep["outcome"]["canonical"].startswith("7:")
    assert rep["outcome"]["girth"] == 4


def test_construct_f8_and_phi31(tmp_path, capsys):
    assert run(capsys, "construct", "f8", str(tmp_path / "f8"))[0] == 0
    assert parse_arclist((tmp_path / "f8").read_text()).arc_count == 20
    code, out, err = run(capsys, "construct", "phi31", "--family", "D5", "--orders", "1,1,1,1")
    assert code == 0
    d = parse_arclist(out)
    assert (d.n, d.arc_count) == (5, 7)
    assert json.loads(err)["outcome"]["strong"]


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "circulant", "--n", "7"],
        ["construct", "circulant", "--n", "7", "--jumps", "9"],
        ["construct", "phi31", "--family", "D5", "--orders", "1,2,1"],
        ["construct", "tournament", "--n", "2"],
        ["construct", "nope"],
        ["search", "--n", "13", "--k", "3"],
        ["search", "--n", "7", "--k", "3", "--mode", "witness"],
        ["frobnicate"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_check_verdicts(tmp_path, capsys):
    f8p = tmp_path / "f8"
    run(capsys, "construct", "f8", str(f8p))
    code, out, _ = run(capsys, "check", str(f8p), "--k", "3", "--min-outdeg", "2", "--min-indeg", "1")
    assert code == 0 and json.loads(out)["outcome"]["member"]

    c4 = tmp_path / "c4"
    c4.write_text(to_arclist(Digraph.from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0)])))
    code, out, _ = run(capsys, "check", str(c4), "--k", "3", "--min-outdeg", "2")
    rep = json.loads(out)["outcome"]
    assert code == 1 and not rep["member"] and rep["reasons"] == ["δ⁺ = 1"]

    two = tmp_path / "two"
    two.write_text("3\n0 1\n1 0\n1 2\n2 0\n")
    code, out, _ = run(capsys, "check", str(two), "--k", "2")
    assert code == 1 and "girth 2" in json.loads(out)["outcome"]["reasons"]


def test_io_errors(tmp_path, capsys):
    assert run(capsys, "check", str(tmp_path / "missing"), "--k", "3")[0] == 3
    bad = tmp_path / "bad"
    bad.write_text("3\n0 0\n")
    assert run(capsys, "check", str(bad), "--k", "3")[0] == 3


def test_search_writes_classes_and_is_reproducible(tmp_path, capsys):
    argv = ["search", "--n", "7", "--k", "3", "--xi", "2", "--zeta", "1", "--mode", "exact", "--out-dir", str(tmp_path)]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    rep = json.loads(out)
    assert rep["outcome"]["phi"] == 14 and rep["outcome"]["classes"] == 1
    files = rep["outcome"]["files"]
    assert len(files) == 1 and parse_arclist(open(files[0]).read()).arc_count == 14
    assert (tmp_path / "report.json").exists()
    _, again, _ = run(capsys, *argv)
    assert payload(out) == payload(again)
    assert list(json.loads(out)) == sorted(json.loads(out))


def test_search_workers_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("GIRTHFORGE_WORKERS", "3")
    code, out, _ = run(capsys, "search", "--n", "6", "--k", "3")
    assert code == 0 and json.loads(out)["timing"]["workers"] == 3


def test_search_witness(tmp_path, capsys):
    code, out, _ = run(
        capsys, "search", "--n", "8", "--k", "3", "--xi", "2", "--mode", "witness", "--target", "20", "--seed", "1", "--out-dir", str(tmp_path)
    )
    rep = json.loads(out)
    assert code == 0 and rep["outcome"]["status"] == "witness_found" and rep["seed"] == 1


def test_classify_command(tmp_path, capsys):
    path = tmp_path / "d5"
    run(capsys, "construct", "phi31", str(path), "--family", "D5", "--orders", "1,1,1,1")
    code, out, _ = run(capsys, "classify", str(path))
    assert code == 0 and json.loads(out)["outcome"]["family"] == "D5"
    f8p = tmp_path / "f8"
    run(capsys, "construct", "f8", str(f8p))
    assert run(capsys, "classify", str(f8p))[0] == 1


def test_verify_detects_fault_injection(monkeypatch, capsys):
    from girthforge.construct import circulant

    monkeypatch.setattr(verify, "f8", lambda: circulant(8, [1, 2]))
    monkeypatch.setattr(verify, "CRITERIA", [c for c in verify.CRITERIA if c[0] in (1, 3)])
    code, out, _ = run(capsys, "verify-theorems", "--tier", "fast")
    assert code == 1
    assert "[PASS] 1." in out and "[FAIL] 3." in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "girthforge", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "girthforge" in res.stdout
