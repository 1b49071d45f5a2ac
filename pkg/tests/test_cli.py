import json

import pytest

from randers.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_timing(text):
    payload = json.loads(text)
    payload.pop("timing", None)
    return payload


def test_verify_small_sweep_passes(capsys):
    code, out, err = run(["verify", "--cases", "16", "--seed", "3"], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["summary"]["pass"]
    assert "PASS oracle" in err


def test_verify_deterministic(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["verify", "--cases", "12", "--seed", "5", "--codim", "1", "--report", str(p)]) == 0
    a, b = (strip_timing(p.read_text()) for p in paths)
    assert a == b


def test_verify_impossible_tolerance_fails(capsys):
    code, _, err = run(["verify", "--cases", "8", "--tol", "1e-30"], capsys)
    assert code == 1
    assert "FAIL" in err


@pytest.mark.parametrize("args", [
    ["verify", "--cases", "0"],
    ["verify", "--codim", "3"],
    ["surface", "generate", "--type", "spherical"],
    ["surface", "generate", "--energy", "0"],
    ["surface", "generate", "--energy", "1", "--s-min", "0.5", "--s-max", "1.33"],
    ["surface", "bogus"],
])
def test_usage_errors(args, capsys):
    try:
        code = main(args)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_generate_writes_mesh_and_report(tmp_path, capsys):
    out = tmp_path / "surf"
    code = main(["surface", "generate", "--energy", "1", "--n-s", "6", "--n-theta", "6",
                 "--out", str(out), "--format", "both"])
    assert code == 0
    assert (tmp_path / "surf.obj").exists() and (tmp_path / "surf.csv").exists()
    report = json.loads((tmp_path / "surf.report.json").read_text())
    assert report["pass"] is True
    assert report["statistics"]["BH"]["max"] < 1e-5


def test_check_detects_perturbation(tmp_path, capsys):
    rep = tmp_path / "r.json"
    assert main(["surface", "check", "--energy", "1", "--n-s", "5", "--n-theta", "4", "--report", str(rep)]) == 0
    code = main(["surface", "check", "--input", str(rep), "--scale-x1", "1.1",
                 "--report", str(tmp_path / "p.json")])
    assert code == 1
    assert json.loads((tmp_path / "p.json").read_text())["statistics"]["BH"]["max"] > 1e-2


def test_check_unreadable_input(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("not json")
    assert main(["surface", "check", "--input", str(bad)]) == 2


def test_special_families(capsys):
    for name in ("geodesic-spherical", "geodesic-hyperbolic", "linear"):
        code, out, _ = run(["surface", "special", "--special", name, "--n-s", "4", "--n-theta", "4"], capsys)
        assert code == 0, name
        assert json.loads(out)["parameters"]["family"] in ("geodesic", "linear")


def test_empty_intersection_exit_code(capsys):
    code, _, err = run(["surface", "generate", "--type", "hyperbolic", "--energy", "2",
                        "--n-s", "4", "--n-theta", "4"], capsys)
    assert code == 1
    assert "empty" in err


def test_ht_report_has_no_verdict(capsys):
    code, out, _ = run(["surface", "check", "--energy", "1", "--measure", "ht", "--n-s", "4", "--n-theta", "4"], capsys)
    assert code == 0
    assert json.loads(out)["pass"] is None
