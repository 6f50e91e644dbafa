from __future__ import annotations

import json

import pytest

from injhull.cli import main, parse_lambda_eps, parse_subset, UsageError
from injhull.metric import graph_metric, validate_metric, write_metric_csv
from injhull import generators as gen


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "cycle", "5")
    assert code == 0 and out.splitlines()[0] == "5 5"
    f = tmp_path / "c5.txt"
    assert run(capsys, "generate", "cycle", "5", "--out", str(f))[0] == 0
    assert f.read_text() == out


def test_invariants_c4(capsys):
    code, out, _ = run(capsys, "invariants", "--generate", "cycle 4", "--subset", "Y=0,1")
    assert code == 0
    rep = json.loads(out)
    assert rep["delta"]["value"] == 2
    (sub,) = rep["subsets"]
    assert sub["members"] == [0, 1]
    assert [m["witnesses"]["lambda"] for m in sub["morse"]] == [9, 1]


def test_invariants_text_and_metric_csv(capsys, tmp_path):
    f = tmp_path / "m.csv"
    f.write_text(write_metric_csv(validate_metric([[0, 2, 4], [2, 0, 2], [4, 2, 0]], scale=2)))
    code, out, _ = run(capsys, "invariants", "--input", str(f), "--format", "text", "--subset", "Y=0,2")
    assert code == 0 and out.startswith("n=3 scale=2")


def test_hull_c4(capsys):
    code, out, _ = run(capsys, "hull", "--generate", "cycle 4")
    assert code == 0
    data = json.loads(out)
    assert len(data["forms"]) == 5


def test_verify_user_input_and_determinism(capsys, tmp_path):
    args = ["verify", "--generate", "cycle 6", "--subset", "Y=geodesic:0..3", "--with-hull",
            "--suite", "projection_geodesic,density", "--suite", "helly"]
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0 and out1 == out2
    rep = json.loads(out1)
    assert rep["instances"] == 2 and set(rep["suites"]) == {"projection_geodesic", "density", "helly"}


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "verify", "--generate", "cycle 4", "--claim-helly", "--suite", "helly")[0] == 1
    assert run(capsys, "verify", "--suite", "bogus")[0] == 2
    assert run(capsys, "hull", "--generate", "cycle 10", "--budget", "5")[0] == 1
    bad = tmp_path / "g.txt"
    bad.write_text("4 2\n0 1\n2 3\n")
    code, _, err = run(capsys, "hull", "--input", str(bad))
    assert code == 2 and json.loads(err)["error"] == "Disconnected"
    assert run(capsys, "hull", "--input", str(tmp_path / "missing"))[0] == 2
    assert run(capsys, "hull")[0] == 2
    assert run(capsys, "hull", "--generate", "cycle x")[0] == 2
    assert run(capsys, "invariants", "--generate", "cycle 4", "--subset", "Y=9")[0] == 2
    assert run(capsys, "invariants", "--generate", "cycle 4", "--lambda-eps", "0,1")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_parsers():
    assert parse_lambda_eps("9,0; 3/2,1/2") == [(9, 0), (1.5, 0.5)]
    with pytest.raises(UsageError):
        parse_lambda_eps("1")
    X = graph_metric(gen.path(5))
    assert parse_subset("Y=all", X).members == (0, 1, 2, 3, 4)
    s = parse_subset("G=geodesic:4..1", X)
    assert s.name == "G" and s.path == (4, 3, 2, 1) and s.members == (1, 2, 3, 4)
    assert parse_subset("3,1", X).members == (1, 3)
    with pytest.raises(UsageError):
        parse_subset("Y=", X)
