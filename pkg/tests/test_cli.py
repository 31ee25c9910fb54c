import json

import pytest

from artifact.cli import main
from artifact.fixtures import load_graph
from artifact.verify import k4_pair


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


@pytest.fixture
def pair_file(tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(k4_pair(load_graph("k4")).to_json()))
    return str(path)


def test_validate(capsys):
    code, out = run(capsys, "validate", "disconnected.json")
    assert code == 2 and out["message"] == "graph not connected"
    code, out = run(capsys, "validate", "--graph", "k4.json")
    assert code == 0 and out["genus"] == 3 and out["seed"] == 0


def test_fan_of_extremal_brick(capsys):
    code, out = run(capsys, "fan", "--graph", "k4.json", "--brick", "B0")
    assert code == 0
    assert len(out["maximal"]) == 3
    assert all(out["cones"][i]["dim"] == 6 for i in out["maximal"])


def test_eta_and_cone(capsys, pair_file):
    code, out = run(capsys, "eta", "--graph", "k4", "--pair", pair_file, "--hat")
    assert code == 0
    assert out["eta"]["u0"] == "3" and out["eta"]["u1,u2,u3"] == "1"
    assert out["upmin"]["u0,u1"] == "3"
    code, out = run(capsys, "cone", "--graph", "k4", "--pair", pair_file)
    assert code == 0 and out["dim"] == 6


def test_squash_lists_facets(capsys, pair_file):
    code, out = run(capsys, "squash", "--graph", "k4", "--pair", pair_file)
    assert code == 0 and len(out["facets"]) == 2
    circuit = ",".join(out["facets"][0]["circuit"])
    code, one = run(capsys, "squash", "--graph", "k4", "--pair", pair_file, "--circuit", circuit)
    assert code == 0 and one["squashed"] == out["facets"][0]["squashed"]


def test_setfn_residue_gamma(capsys, tmp_path):
    f = tmp_path / "f.json"
    f.write_text(json.dumps({"ground": ["a", "b"], "values": {"": "0", "a": "2", "b": "1", "a,b": "1"}}))
    code, out = run(capsys, "setfn", "--setfn", str(f), "--polytope")
    assert code == 0 and out["upmin"]["a"] == "1" and out["properties"]["submodular"]
    code, out = run(capsys, "residue", "--graph", "theta")
    assert code == 0 and out["dim"] == 2
    code, out = run(capsys, "gamma", "--graph", "k4")
    assert code == 0 and out["gamma"]["u0"] == "2"


def test_psl_bricks_pairs_at(capsys, tmp_path):
    code, out = run(capsys, "psl", "--graph", "theta")
    assert code == 0 and out["count"] == len(out["pairs"]) >= 1
    code, out = run(capsys, "bricks", "--graph", "k4")
    assert code == 0 and out["count"] == len(out["bricks"])
    code, out = run(capsys, "bricks", "--graph", "k4", "--cap", "2")
    assert code == 3 and out["error"] == "cap overflow"
    lengths = tmp_path / "l.json"
    lengths.write_text(json.dumps(["1", "2", "3", "5/2", "7/3", "11/4"]))
    code, out = run(capsys, "pairs-at", "--graph", "k4", "--lengths", str(lengths))
    assert code == 0 and out["pairs"]


def test_realize_with_quartic(capsys, tmp_path, pair_file):
    rho = tmp_path / "rho.json"
    rho.write_text(json.dumps({"a_400": "1", "a_040": "1", "a_004": "1"}))
    argv = ["realize", "--graph", "k4", "--pair", pair_file, "--rho", str(rho), "--seed", "9"]
    code, first = run(capsys, *argv)
    assert code == 0 and first["seed"] == 9 and first["dim"] == 3
    assert first["quartic"]["rho"] == {"01": "2", "02": "2", "03": "2", "12": "1", "13": "1", "23": "1"}
    code, second = run(capsys, *argv)
    assert first == second
    rho.write_text(json.dumps({"a_400": "1"}))
    code, out = run(capsys, *argv)
    assert code == 2 and "node" in out["message"]


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = run(capsys, "validate", str(bad))
    assert code == 2 and out["error"] == "malformed JSON"
    code, out = run(capsys, "gamma", "--graph", str(tmp_path / "missing.json"))
    assert code == 2
    code, out = run(capsys, "verify", "--suite", "nope")
    assert code == 2


def test_verify_single_suite(capsys):
    code, out = run(capsys, "verify", "--suite", "quartic,upmin-table", "--seed", "3", "--quiet")
    assert code == 0 and out["passed"] and out["seed"] == 3
    assert [s["suite"] for s in out["suites"]] == ["quartic", "upmin-table"]


def test_no_floats_in_output(capsys, pair_file):
    def walk(x):
        if isinstance(x, float):
            raise AssertionError(f"float {x} in output")
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        if isinstance(x, list):
            for v in x:
                walk(v)

    for argv in (["eta", "--graph", "k4", "--pair", pair_file], ["fan", "--graph", "k4", "--brick", "B0"]):
        _, out = run(capsys, *argv)
        walk(out)


def test_shipped_pair_and_quartic_fixtures(capsys):
    from artifact.fixtures import load_json

    assert load_json("k4_pair") == k4_pair(load_graph("k4")).to_json()
    code, out = run(capsys, "realize", "--graph", "k4", "--pair", "k4_pair", "--rho", "fermat_quartic", "--seed", "7")
    assert code == 0 and out["dim"] == 3 and out["dim_w_hat"] == 4
