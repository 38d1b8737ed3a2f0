import json
import subprocess
import sys

import pytest

from scatterjump.cli import CliConfig, run_cli


def run(capsys, *argv):
    code = run_cli(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_iso_example(capsys):
    code, out, _ = run(capsys, "iso", "1+w(1)", "w(1)")
    assert code == 0 and out.startswith("Isomorphic")


def test_iso_negative(capsys):
    code, out, _ = run(capsys, "iso", "w(1)", "z(1)")
    assert code == 1 and out.startswith("NonIsomorphic")


def test_rank_example(capsys):
    code, out, _ = run(capsys, "rank", "z(1)+1+z(1)")
    assert (code, out.strip()) == (0, "2")


def test_verify_example(capsys):
    code, out, _ = run(capsys, "verify", "r_dcc_phi", "--bound", "3")
    rep = json.loads(out)
    assert code == 0
    assert rep["failures"] == [] and rep["forward_failures"] == [] and rep["backward_failures"] == []
    assert "elapsed" not in rep


def test_verify_is_deterministic(capsys):
    _, a, _ = run(capsys, "verify", "r_quotient")
    _, b, _ = run(capsys, "verify", "r_quotient")
    assert a == b


def test_json_format(capsys):
    code, out, _ = run(capsys, "--format", "json", "canon", "1+w(1)")
    assert code == 0 and json.loads(out) == {"canonical": "w(1)"}


def test_derive_steps(capsys):
    code, out, _ = run(capsys, "derive", "w(w(1))", "--steps", "2")
    assert code == 0 and out.split() == ["w(1)", "1"]


def test_complete(capsys):
    assert run(capsys, "complete", "check", "z(1)")[0] == 0
    assert run(capsys, "complete", "check", "w(z(1))")[0] == 1
    code, out, _ = run(capsys, "complete", "hull", "w(z(1))")
    assert code == 0 and out.strip()


def test_tree_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "order2tree", "z(1)+1+z(1)")
    f = tmp_path / "t.json"
    f.write_text(out)
    code, enc, _ = run(capsys, "tree2order", str(f))
    assert code == 0
    code, back, _ = run(capsys, "order2tree", "--decode", enc.strip())
    assert code == 0 and json.loads(back) == json.loads(out)


def test_rel(capsys):
    x = json.dumps({"lassoZ": {"left": [0], "mid": [1], "right": [0], "origin": 0}})
    y = json.dumps({"lassoZ": {"left": [0], "mid": [1], "right": [0], "origin": 5}})
    z = json.dumps({"lassoZ": {"left": [0], "mid": [1, 1], "right": [0], "origin": 0}})
    assert run(capsys, "rel", "eval", "jump(delta2,Z)", x, y)[0] == 0
    assert run(capsys, "rel", "eval", "jump(delta2,Z)", x, z)[0] == 1
    code, out, _ = run(capsys, "rel", "canon", "jump(delta2,Z)", y)
    assert code == 0 and "lassoZ" in json.loads(out)


def test_reduce_unrepresentable(capsys):
    cell = lambda b: {"lassoSeq": {"prefix": [], "period": [b]}}
    p = json.dumps({"lassoZ": {"left": [cell(0)], "mid": [], "right": [cell(1)], "origin": 0}})
    assert run(capsys, "reduce", "r_zjump_to_fs", p, "--finite")[0] == 4
    code, out, _ = run(capsys, "reduce", "r_zjump_to_fs", p)
    assert code == 0 and "orbitSet" in json.loads(out)


def test_enumerate_count(capsys):
    code, out, _ = run(capsys, "enumerate", "--size", "4", "--count")
    assert (code, out.strip()) == (0, "125")


@pytest.mark.parametrize("argv", [["bogus"], ["rank", "w("], ["verify", "r_nope"], [],
                                  ["rel", "eval", "jump(delta2,Z)", "{}"], ["enumerate", "--size", "12"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 3


def test_config_validation():
    with pytest.raises(ValueError):
        CliConfig(format="xml")
    with pytest.raises(ValueError):
        CliConfig(term_cap=0)


def test_report(capsys, tmp_path):
    code, out, _ = run(capsys, "report", "--out", str(tmp_path), "--size", "4", "--reductions", "r_quotient")
    assert code == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["census.csv", "reductions.csv", "report.json", "report.png"]
    data = json.loads((tmp_path / "report.json").read_text())
    assert sum(r["terms"] for r in data["census"]) == 125
    assert (tmp_path / "report.png").read_bytes()[:4] == b"\x89PNG"


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "scatterjump", "rank", "w(w(1))"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.strip() == "2"
