import json
from fractions import Fraction

import pytest

from collective.cli import main
from collective.frames import build_basis, frame_map, lambda_from_motion, measure_length
from collective.environment import standard_direction_set
from collective.scenario import (
    ScenarioError,
    bundled_scenarios,
    load_scenario,
    parse_scenario,
    trace_csv,
    verify_trace_csv,
)

from conftest import GOLDEN

BUNDLED = [p.stem for p in bundled_scenarios()]


def cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def minimal(**over):
    data = {
        "environment": {"dimension": 1, "topology": "infinite"},
        "colours": [{"name": "r", "rule": {"default": "R"}}],
        "population": [{"id": 1, "colour": "r", "head": [0], "dir": "R"}],
        "horizon": 4,
    }
    data.update(over)
    return data


def test_bundled_names():
    assert set(BUNDLED) == {"ring6_clock", "passthrough_streams", "deflection_2d"}


@pytest.mark.parametrize("name", BUNDLED)
def test_validate_bundled(capsys, name):
    code, out, _ = cli(capsys, "validate", name)
    assert code == 0 and out.startswith("ok: " + name)


@pytest.mark.parametrize(
    "patch, field",
    [
        ({"horizon": -1}, "horizon"),
        ({"colours": []}, "colours"),
        ({"population": [{"id": 1, "colour": "nope", "head": [0], "dir": "R"}]}, "population"),
        ({"population": [{"id": 1, "colour": "r", "head": [0, 0, 0], "dir": "R"}]}, "population"),
        ({"population": [{"id": 1, "colour": "r", "head": [0], "dir": "Q"}]}, "population"),
        (
            {"environment": {"dimension": 1, "topology": "infinite",
                             "directions": [{"name": "a", "vector": [1]}, {"name": "b", "vector": [1]},
                                            {"name": "c", "vector": [-2]}]}},
            "environment",
        ),
        ({"environment": {"dimension": 1, "topology": {"ring": 1}}}, "environment"),
        ({"bodies": {"b": [1, 9]}}, "bodies"),
    ],
)
def test_invalid_scenarios(tmp_path, capsys, patch, field):
    with pytest.raises(ScenarioError) as info:
        parse_scenario(minimal(**patch))
    assert info.value.field.startswith(field)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(minimal(**patch)))
    code, _, err = cli(capsys, "validate", path)
    assert code == 2 and err.startswith("error: " + field)


def test_invalid_json(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"horizon": ')
    code, _, err = cli(capsys, "validate", path)
    assert code == 2 and "line 1" in err


def test_missing_file(capsys):
    assert cli(capsys, "validate", "/nonexistent/scenario.json")[0] == 1


@pytest.mark.parametrize("name", BUNDLED)
def test_run_matches_golden(capsys, tmp_path, name):
    code, out, _ = cli(capsys, "run", name)
    assert code == 0
    assert out == (GOLDEN / (name + ".csv")).read_text()
    out_path = tmp_path / "trace.csv"
    assert cli(capsys, "run", name, "--out", out_path, "--parallel")[0] == 0
    assert out_path.read_text() == out
    assert cli(capsys, "verify", name, out_path)[0] == 0


def test_verify_rejects_tampering(capsys, tmp_path):
    text = (GOLDEN / "ring6_clock.csv").read_text().splitlines()
    i = next(k for k, row in enumerate(text) if row.split(",")[5] == "1")
    cells = text[i].split(",")
    cells[5] = "0"
    text[i] = ",".join(cells)
    path = tmp_path / "tampered.csv"
    path.write_text("\n".join(text) + "\n")
    assert cli(capsys, "verify", "ring6_clock", path)[0] == 1
    assert verify_trace_csv(load_scenario("ring6_clock"), path.read_text())


def test_events_jsonl(capsys, tmp_path):
    events = tmp_path / "events.jsonl"
    assert cli(capsys, "run", "ring6_clock", "--events", events)[0] == 0
    rows = [json.loads(line) for line in events.read_text().splitlines()]
    assert len(rows) == 14
    assert {r["elem_id"] for r in rows} == {1, 2}
    assert sum(r["turned"] for r in rows) == 4


def test_run_horizon_and_cap(capsys):
    code, out, _ = cli(capsys, "run", "ring6_clock", "--horizon", 2, "--cap", 10)
    assert code == 0 and len(out.splitlines()) == 1 + 2 * 3


def test_translated_scenario_trace_shifts():
    sc = load_scenario("passthrough_streams")
    a = sc.run()
    b = sc.translated((5,)).run()
    for e in a.elem_ids:
        for t in range(a.horizon + 1):
            assert b.position(e, t)[0] == a.position(e, t)[0] + 5


def test_analyze(capsys, tmp_path):
    code, out, _ = cli(capsys, "analyze", "ring6_clock", "--body", "clock", "--period")
    assert code == 0
    assert "period: 6" in out and "velocity: (0)" in out
    kin = tmp_path / "k.csv"
    fig = tmp_path / "k.svg"
    code, _, _ = cli(capsys, "analyze", "passthrough_streams", "--body", "all",
                     "--kinematics", kin, "--figure", fig, "--no-timestamp")
    assert code == 0
    lines = kin.read_text().splitlines()
    assert lines[0] == "t,body,xB,vB,changed_state,codirected"
    assert len(lines) == 1 + 12
    assert fig.read_text().lstrip().startswith("<?xml")


def test_analyze_no_period(capsys):
    code, out, _ = cli(capsys, "analyze", "passthrough_streams", "--body", "all", "--period", "--horizon", 50)
    assert code == 1


def test_unknown_body(capsys):
    assert cli(capsys, "analyze", "ring6_clock", "--body", "nobody")[0] == 2


def test_frames_outputs(capsys):
    code, out, _ = cli(capsys, "frames", "boost", "--v", "1/2", "--w", "3/4")
    assert code == 0
    assert out.splitlines()[0] == "lambda = (5/3, 1)"
    assert "  (4/3, 2/3)" in out and "  (1/6, 4/3)" in out
    code, out, _ = cli(capsys, "frames", "addvel", "--v1", "1/2", "--v2", "1/2")
    assert out.splitlines() == ["v = 16/17", "w = 16/17"]
    code, out, _ = cli(capsys, "frames", "compose", "--lam1", "2,1", "--lam2", "1/2,3")
    assert out.splitlines()[0] == "lambda = (1, 3)"
    code, out, _ = cli(capsys, "frames", "invert", "--lam", "2,1/3")
    assert out.splitlines()[0] == "lambda = (1/2, 3)"
    code, out, _ = cli(capsys, "frames", "length", "--v", "1/2", "--w", "3/4", "--rod", "1")
    basis = build_basis(standard_direction_set(1))
    fm = frame_map(basis, lambda_from_motion(basis, (Fraction(1, 2),), Fraction(3, 4)))
    assert out.strip() == "length = %s" % measure_length(fm, (0,), (1,))


def test_frames_dim2(capsys):
    code, out, _ = cli(capsys, "frames", "boost", "--dim", 2, "--v", "0,0", "--w", "1")
    assert code == 0 and out.splitlines()[0] == "lambda = (1, 1, 1)"


@pytest.mark.parametrize(
    "argv",
    [
        ("boost", "--v", "3", "--w", "1"),
        ("boost", "--v", "1/2", "--w", "0"),
        ("boost", "--v", "x", "--w", "1"),
        ("invert", "--lam", "1,-1"),
        ("compose", "--lam1", "1,1", "--lam2", "1,1,1"),
        ("invert", "--lam", "1,1,1"),
    ],
)
def test_frames_errors(capsys, argv):
    code, _, err = cli(capsys, "frames", *argv)
    assert code == 2 and err.startswith("error: ")


def test_iso_cli(capsys, tmp_path):
    code, out, _ = cli(capsys, "iso", "ring6_clock", "ring6_clock", "--body-a", "clock", "--body-b", "clock",
                       "--tau-a", 6, "--tau-b", 6)
    assert code == 0
    assert json.loads(out) == {"isomorphic": True, "phi": [[1, 1], [2, 2]], "tauA": "0", "tauB": "0"}
    code, out, _ = cli(capsys, "iso", "ring6_clock", "ring6_clock", "--body-a", "clock", "--body-b", "a")
    assert code == 1 and json.loads(out)["isomorphic"] is False


def test_diagram_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    assert cli(capsys, "diagram", "ring6_clock", "--out", a, "--no-timestamp")[0] == 0
    assert cli(capsys, "diagram", "ring6_clock", "--out", b, "--no-timestamp")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"<svg" in a.read_bytes()


def test_diagram_rejects_planar(capsys, tmp_path):
    code, _, err = cli(capsys, "diagram", "deflection_2d", "--out", tmp_path / "x.svg")
    assert code != 0 and "error" in err


def test_csv_number_format():
    sc = load_scenario("deflection_2d")
    text = trace_csv(sc.run(), sc.colours)
    assert "-0," not in text and "0.866025403784" in text
