import json
import math

import pytest

from diametral.cli import EXIT_CONFIG, EXIT_OK, EXIT_VIOLATION, ConfigError, JobConfig, main, parse_points
from diametral.core import BadPointSpec
from diametral.planar import PLANAR_BOUNDS
from diametral.report import strip_timing, validate
from diametral.solid import cube


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "cube.off").write_text(cube().to_off())
    (tmp_path / "square.csv").write_text("x,y\n0,0\n1,0\n1,1\n0,1\n")
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    rep = json.loads(out)
    validate(rep)
    return code, rep


def by_anchor(rep):
    return {c["anchor"]: c for c in rep["checks"]}


# -- analyze ---------------------------------------------------------------------------


def test_analyze_cube_vertex(work, capsys):
    code, rep = run_json(capsys, "analyze", "cube.off", "--points", "0", "--steiner", "2", "--sampling", "3")
    assert code == EXIT_OK
    c = by_anchor(rep)["thm3.1:1"]
    assert c["hypothesis_holds"] is False
    assert c["margins"]["angle_sum"].endswith("(3π/2)")
    assert rep["geometry"]["extrinsic_diameter"]["length"] == pytest.approx(math.sqrt(3))


def test_analyze_sharp_quad(work, capsys):
    assert run(capsys, "gen", "quad", "--eps", "0.01")[0] == EXIT_OK
    code, rep = run_json(capsys, "analyze", "quad.csv", "--points", "1,3")
    c = by_anchor(rep)["thm2.3:2"]
    assert c["hypothesis_holds"] is False
    assert c["margins"]["bound_minus_sum"] == pytest.approx(-0.01, abs=1e-9)


def test_analyze_spike_apex(work, capsys):
    assert run(capsys, "gen", "spike", "--base", "4", "--height", "10")[0] == EXIT_OK
    code, rep = run_json(capsys, "analyze", "spike.off", "--points", "4")
    checks = by_anchor(rep)
    assert checks["thm3.1:1"]["verdict"] == "holds" and checks["thm3.1:1"]["hypothesis_holds"]
    assert checks["thm4.4:1"]["verdict"] == "holds" and checks["thm4.4:1"]["hypothesis_holds"]
    assert code == EXIT_OK


def test_analyze_summary_text(work, capsys):
    code, out, _ = run(capsys, "analyze", "square.csv", "--points", "0")
    assert code == EXIT_OK
    assert "hypothesis not met" in out and out.rstrip().endswith("PASS")


@pytest.mark.parametrize("example,points", [("triangle", "0"), ("quad", "1,3"), ("pentagon", "1,2,4")])
def test_gen_analyze_roundtrip(work, capsys, example, points):
    run(capsys, "gen", example)
    side = json.loads((work / f"{example}.json").read_text())["expected"]
    code, rep = run_json(capsys, "analyze", f"{example}.csv", "--points", points)
    assert rep["geometry"]["diameter"]["pairs"] == side["diameter_pairs"]
    c = rep["checks"][0]
    assert -c["margins"]["bound_minus_sum"] == pytest.approx(side["excess"], abs=1e-9)


def test_manifest(work, capsys):
    (work / "jobs.json").write_text(json.dumps({"jobs": [
        {"command": "analyze", "input": "square.csv", "points": "0,2", "out": "sq.json"},
        {"command": "analyze", "input": "cube.off", "points": "0", "steiner": 2, "sampling": 2},
    ]}))
    code, rep = run_json(capsys, "analyze", "--manifest", "jobs.json")
    assert code == EXIT_OK and len(rep["jobs"]) == 2
    validate(json.loads((work / "sq.json").read_text()))
    (work / "bad.json").write_text(json.dumps({"jobs": [{"input": "square.csv", "colour": "red"}]}))
    assert run(capsys, "analyze", "--manifest", "bad.json")[0] == EXIT_CONFIG


def test_point_spec():
    C = cube()
    pts = parse_points(C, "v3; e5@0.25; f2@0.25,0.25,0.25,0.25")
    assert pts[0] == 3
    assert [p.kind for p in pts[1:]] == ["edge", "face"]
    assert parse_points(C, "0,2") == [0, 2]
    for bad in ("v99", "e0@1.5", "q1", "f0@1,1"):
        with pytest.raises(BadPointSpec):
            parse_points(C, bad)


def test_job_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        JobConfig.from_dict({"input": "a.csv", "nope": 1})


# -- verify / search -----------------------------------------------------------------------


def test_verify_pass(work, capsys):
    code, out, _ = run(capsys, "verify", "lemma2.1", "--trials", "30")
    assert code == EXIT_OK
    assert "min_sees_angle" in out and "PASS" in out


def test_verify_surface_prints_inconclusive(work, capsys):
    code, out, _ = run(capsys, "verify", "thm4.4", "--trials", "2", "--steiner", "2", "--sampling", "2")
    assert code == EXIT_OK and "inconclusive = " in out


def test_verify_violation_exit_code(work, capsys, monkeypatch):
    monkeypatch.setitem(PLANAR_BOUNDS, 1, math.pi)
    assert run(capsys, "verify", "thm2.3", "--trials", "20")[0] == EXIT_VIOLATION


def test_verify_and_search_deterministic(work, capsys):
    for argv in (["verify", "thm2.3", "--trials", "20", "--seed", "7"],
                 ["search", "planar-2", "--trials", "20", "--seed", "7"],
                 ["search", "conjecture", "--trials", "20", "--seed", "7"]):
        a = run_json(capsys, *argv)[1]
        b = run_json(capsys, *argv)[1]
        assert json.dumps(strip_timing(a), sort_keys=True) == json.dumps(strip_timing(b), sort_keys=True)


def test_out_file_written(work, capsys):
    assert run(capsys, "verify", "cor2.4", "--trials", "5", "--out", "r/v.json")[0] == EXIT_OK
    validate(json.loads((work / "r" / "v.json").read_text()))


# -- gen / plot ----------------------------------------------------------------------------


def test_gen_quad_sidecar(work, capsys):
    run(capsys, "gen", "quad", "--eps", "0.01")
    side = json.loads((work / "quad.json").read_text())
    assert side["expected"]["angle_sum"] == pytest.approx(5 * math.pi / 6 + 0.01, abs=1e-9)
    assert side["expected"]["unique_diameter"] is True


def test_gen_remark_octagon(work, capsys):
    run(capsys, "gen", "remark", "--n", "6", "--k", "3", "--delta", "0.02")
    lines = (work / "remark.csv").read_text().strip().splitlines()
    assert len(lines) == 1 + 8


def test_gen_spike_records_apex(work, capsys):
    run(capsys, "gen", "spike", "--base", "4", "--height", "10")
    exp = json.loads((work / "spike.json").read_text())["expected"]
    assert exp["apex_angles"][0] == pytest.approx(exp["apex_angle_closed_form"], abs=1e-12)
    assert exp["apex_angles"][0] < 2 * math.pi / 3


def test_plot_pentagon_with_report(work, capsys):
    run(capsys, "gen", "pentagon")
    run(capsys, "analyze", "pentagon.csv", "--points", "1,2,4", "--out", "pent.json")
    assert run(capsys, "plot", "pentagon.csv", "--report", "pent.json")[0] == EXIT_OK
    svg = (work / "pentagon.svg").read_text()
    assert svg.count('stroke="#c62828"') == 1 and svg.count("<circle") == 3
    run(capsys, "plot", "pentagon.csv", "--report", "pent.json", "--out", "again.svg")
    assert (work / "again.svg").read_bytes() == (work / "pentagon.svg").read_bytes()


def test_plot_square(work, capsys):
    assert run(capsys, "plot", "square.csv")[0] == EXIT_OK
    assert (work / "square.svg").read_text().count('stroke="#c62828"') == 2


def test_plot_cube_geodesic(work, capsys):
    run(capsys, "analyze", "cube.off", "--points", "0", "--steiner", "2", "--sampling", "2", "--out", "c.json")
    assert run(capsys, "plot", "cube.off", "--report", "c.json")[0] == EXIT_OK
    assert "<line" in (work / "cube.svg").read_text()
    assert run(capsys, "plot", "cube.off")[0] == EXIT_CONFIG


# -- errors ----------------------------------------------------------------------------------


@pytest.mark.parametrize("argv", [
    ["verify", "nope"],
    ["search", "planar-9"],
    ["gen", "hexagon"],
    ["analyze", "missing.csv"],
    ["analyze", "square.csv", "--points", "0,1,2,3"],
    ["analyze", "square.csv", "--points", "7"],
    ["verify", "thm2.3", "--seed", "-1"],
    ["verify", "thm2.3", "--trials", "-2"],
    ["bogus"],
])
def test_config_errors_exit_3(work, capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_CONFIG
    assert err


def test_parse_error_names_line(work, capsys):
    (work / "bad.off").write_text("OFF\n4 1 0\n0 0 0\n1 0 0\n")
    code, _, err = run(capsys, "analyze", "bad.off")
    assert code == EXIT_CONFIG and "bad.off:4:" in err
