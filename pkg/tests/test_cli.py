import json
import pathlib

import pytest

from maslov_witt.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, InputError, main, parse_scenario, run

ROOT = pathlib.Path(__file__).resolve().parents[1]
SCEN = ROOT / "scenarios"


def scenario(tasks, objects=None, field=None, g=1):
    return json.dumps({
        "field": field or {"kind": "Q"},
        "g": g,
        "objects": objects or {},
        "tasks": tasks,
    })


def _main(argv, capsys):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_fixture_parses_to_one_task():
    sc = parse_scenario((SCEN / "g1_f5_maslov.json").read_text())
    assert len(sc.tasks) == 1


@pytest.mark.parametrize("path", sorted(SCEN.glob("*.json")), ids=lambda p: p.name)
def test_bundled_scenarios_run(path, capsys):
    code, report = _main(["run", str(path), "--seed", "1"], capsys)
    assert code == EXIT_OK
    assert all(t["status"] == "ok" for t in report["tasks"])


def test_deterministic_output(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    src = str(SCEN / "q_tour.json")
    assert main(["run", src, "--seed", "42", "--out", str(a)]) == EXIT_OK
    assert main(["run", src, "--seed", "42", "--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_phi_on_h2():
    text = scenario(
        [{"command": "phi", "args": ["h"]}],
        {"h": {"type": "symplectic", "generator": "h", "arg": [[2]]}},
    )
    report = run(parse_scenario(text), 0)
    result = report["tasks"][0]["result"]
    assert result["phi"] == {"rank_mod_2": 0, "disc": "2"}
    assert result["closed_form"] == result["phi"]


def test_maslov_with_repeated_lagrangian():
    text = scenario(
        [{"command": "maslov", "args": ["L", "L", "M"]}],
        {"L": {"type": "lagrangian", "basis": "L"}, "M": {"type": "lagrangian", "basis": [[1], [3]]}},
    )
    report = run(parse_scenario(text), 0)
    assert report["tasks"][0]["result"]["mu_BL"] == {"rank_mod_2": 0, "disc": "1", "signature": 0, "residues": {}}


@pytest.mark.parametrize("text, where", [
    ("{", "line 1"),
    (scenario([], field={"kind": "Fp", "p": 2}), "field"),
    (scenario([], field={"kind": "Fp", "p": 9}), "field"),
    (scenario([], g=0), "g"),
    (scenario([{"command": "frobnicate", "args": []}]), "tasks[0]"),
    (scenario([{"command": "maslov", "args": ["nope"]}]), "tasks[0].args[0]"),
    (scenario([], {"X": {"type": "lagrangian", "basis": [[1], [0], [0]]}}), "objects.X"),
    (scenario([], {"X": {"type": "symplectic", "matrix": [[1, 1], [1, 1]]}}), "objects.X"),
    (scenario([], {"P": {"type": "path", "nodes": ["Z"]}}), "objects.P.nodes[0]"),
])
def test_parse_errors_carry_location(text, where):
    with pytest.raises(InputError) as info:
        parse_scenario(text)
    assert where in str(info.value)


def test_characteristic_two_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(scenario([], field={"kind": "Fp", "p": 2}))
    code, report = _main(["run", str(bad)], capsys)
    assert code == EXIT_INPUT
    assert "characteristic 2" in report["input_error"]


def test_missing_file_is_input_error(tmp_path, capsys):
    code, _ = _main(["run", str(tmp_path / "absent.json")], capsys)
    assert code == EXIT_INPUT


def test_props_shortcut(capsys):
    code, report = _main(["props", "shortcut", "--cases", "100", "--seed", "7"], capsys)
    assert code == EXIT_OK
    fam = report["families"][0]
    assert fam["cases"] == fam["passed"] == 100


def test_props_failure_exit_code(capsys):
    code, report = _main(["props", "phi_swap_literal", "--cases", "24", "--seed", "7"], capsys)
    assert code == EXIT_FAIL
    assert report["families"][0]["failures"]


def test_unknown_family(capsys):
    code, _ = _main(["props", "nope"], capsys)
    assert code == EXIT_INPUT


def test_seed_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("MASLOV_WITT_SEED", "9")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["run", str(SCEN / "q_tour.json"), "--out", str(a)])
    main(["run", str(SCEN / "q_tour.json"), "--seed", "9", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
