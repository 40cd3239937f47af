import io
import json
import subprocess
import sys

import pytest

from thermflow.cli import main


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_sim_prints_final_state():
    code, out, _ = run_cli("sim", "--scene", "builtin:cs1", "--until", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "time=1.0000000000"
    assert "coffee.temp=69.7791005291" in lines
    assert "crConduct.qdot=0.4148571428" in lines


def test_sim_json():
    code, out, _ = run_cli("sim", "--scene", "builtin:cs2", "--until", "2", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["command"] == "sim"
    assert payload["clock"] == "2"
    assert payload["bindings"]["coffee.phase"] == "solid"
    assert payload["bindings"]["boiler.qdot"] == "1.5000000000"


def test_sim_collect_csv():
    code, out, _ = run_cli("sim", "--scene", "builtin:cs1", "--until", "2", "--collect", "csv")
    assert code == 0
    assert out.splitlines() == [
        "time,coffee.temp,room.temp",
        "0.0000000000,70.0000000000,20.0000000000",
        "1.0000000000,69.7791005291,20.0052069160",
        "2.0000000000,69.5591999938,20.0103902858",
    ]


def test_sim_csv_file(tmp_path):
    path = tmp_path / "trace.csv"
    code, _, _ = run_cli("sim", "--scene", "builtin:cs2", "--until", "3", "--csv", str(path))
    assert code == 0
    rows = path.read_bytes().split(b"\n")
    assert rows[0] == b"time,coffee.temp,coffee.heatTrans,room.temp,crConduct.qdot,crConvect.qdot,boiler.qdot"
    assert len(rows) == 6 and rows[-1] == b""


def test_step_override():
    code, out, _ = run_cli("sim", "--scene", "builtin:cs1", "--until", "1", "--step", "1/2")
    assert code == 0
    assert out.splitlines()[0] == "time=1.0000000000"


def test_search_solution_and_none():
    code, out, _ = run_cli("search", "--scene", "builtin:cs1", "--pred", "temp(coffee) < 69",
                           "--until", "100", "--max", "2")
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2 and lines[0].startswith("time=5.0000000000 ")
    code, out, _ = run_cli("search", "--scene", "builtin:cs1", "--pred", "temp(coffee) < 0",
                           "--until", "10")
    assert (code, out) == (1, "no solution\n")


def test_find_earliest_json():
    code, out, _ = run_cli("find-earliest", "--scene", "builtin:cs2", "--json",
                           "--pred", "phaseIs(coffee, melting)")
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] == "solution"
    assert payload["solutions"][0]["clock"] == "12"


def test_inconclusive_exit_code(monkeypatch):
    monkeypatch.setenv("THERMFLOW_STEP_CAP", "10")
    code, out, _ = run_cli("find-earliest", "--scene", "builtin:cs1", "--pred", "temp(coffee) < 0")
    assert (code, out) == (3, "inconclusive\n")
    code, _, _ = run_cli("find-earliest", "--scene", "builtin:cs1", "--pred", "temp(coffee) < 0",
                         "--step-cap", "5")
    assert code == 3


def test_mc_holds_and_violated():
    code, out, _ = run_cli("mc", "--scene", "builtin:cs3", "--until", "20",
                           "--formula", "[] (temp-ok -> [] temp-ok)")
    assert (code, out) == (0, "holds\n")
    code, out, _ = run_cli("mc", "--scene", "builtin:cs1", "--until", "3", "--formula", "<> cold",
                           "--prop", "cold=temp(coffee) < 0")
    assert code == 1
    lines = out.splitlines()
    assert lines[:2] == ["violated", "counterexample:"]
    assert len(lines) == 6


def test_mc_json_counterexample():
    code, out, _ = run_cli("mc", "--scene", "builtin:cs1", "--until", "5", "--json",
                           "--formula", "[] hot", "--prop", "hot=temp(coffee) > 69.5")
    assert code == 1
    payload = json.loads(out)
    assert payload["verdict"] == "violated"
    assert [s["clock"] for s in payload["counterexample"]] == ["0", "1", "2", "3"]


@pytest.mark.parametrize(
    "argv",
    [
        ["sim", "--scene", "builtin:cs1"],
        ["sim", "--scene", "builtin:cs1", "--until", "abc"],
        ["sim", "--scene", "builtin:cs1", "--until", "3/2"],
        ["sim", "--scene", "builtin:nope", "--until", "1"],
        ["search", "--scene", "builtin:cs1", "--pred", "temp(ghost) > 1"],
        ["mc", "--scene", "builtin:cs1", "--until", "1", "--formula", "[] p"],
        ["mc", "--scene", "builtin:cs1", "--until", "1", "--formula", "[] (p", "--prop", "p=true"],
        ["mc", "--scene", "builtin:cs1", "--until", "1", "--formula", "[] p", "--prop", "p"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = run_cli(*argv)
    assert code == 2
    assert err or capsys.readouterr().err


def test_unreadable_and_malformed_scene_files(tmp_path):
    code, _, err = run_cli("sim", "--scene", str(tmp_path / "missing.scene"), "--until", "1")
    assert code == 2 and "missing.scene" in err
    bad = tmp_path / "bad.scene"
    bad.write_text("[entity a] heatCap=1 mass=0 temp=1\n")
    code, _, err = run_cli("sim", "--scene", str(bad), "--until", "1")
    assert code == 2
    assert "line 1, column 27" in err and "mass must be positive" in err


def test_scene_file_on_command_line(tmp_path):
    scene = tmp_path / "pair.scene"
    scene.write_text(
        "[params] timeStep=1/4 precision=3\n"
        "[entity a] heatCap=1 mass=1 temp=10\n"
        "[entity b] heatCap=1 mass=1 temp=0\n"
        "[interaction ab] type=convection entity1=a entity2=b area=1 convCoeff=1\n"
    )
    code, out, _ = run_cli("sim", "--scene", str(scene), "--until", "1/4")
    assert code == 0
    # a loses (10 - 0) / 4 = 2.5, b gains it
    assert "a.temp=7.500" in out.splitlines() and "b.temp=2.500" in out.splitlines()


def test_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "thermflow", "mc", "--scene", "builtin:cs1", "--until", "10",
            "--json", "--formula", "[] warm", "--prop", "warm=temp(coffee) > 68"]
    first = subprocess.run(argv, capture_output=True, check=False)
    second = subprocess.run(argv, capture_output=True, check=False)
    assert first.returncode == 1
    assert first.stdout == second.stdout and first.stdout
