import json
import subprocess
import sys

import pytest

from lietower.cli import run


def machine(argv):
    status, text = run(argv + ["--format", "machine"])
    return status, json.loads(text) if text else None


def test_tower_sphere():
    status, doc = machine(["tower", "fixtures/s2", "--stages", "5", "--degrees", "4"])
    assert status == 0
    assert doc["pi_dims"]["2"]["5"] == 1
    assert doc["pi_dims"]["3"]["5"] == 1


def test_broken_input_names_simplex(capsys):
    status, _ = run(["tower", "fixtures/broken"])
    assert status == 1
    assert "simplex e" in capsys.readouterr().err


def test_non_minimal_input_exit_one(capsys):
    status, _ = run(["minimal", "torus"])
    assert status == 1


def test_unknown_input(capsys):
    status, _ = run(["homology", "no/such/thing"])
    assert status == 1


def test_bad_flag_rejected():
    with pytest.raises(SystemExit) as err:
        run(["tower", "s2", "--stages", "1"])
    assert err.value.code == 2


def test_machine_output_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["pi", "wedge", "--stages", "4", "--degrees", "2", "--format", "machine",
         "--output", str(a)])
    run(["pi", "wedge", "--stages", "4", "--degrees", "2", "--format", "machine",
         "--output", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_model_and_homology():
    status, doc = machine(["model", "s1", "--N", "2"])
    assert status == 0
    assert doc["global"]["mc"] == ["v"]
    status, doc = machine(["homology", "s2", "--N", "3", "--degrees", "3"])
    assert doc["indecomposables"] == {"1": 1}
    assert doc["component_homology"] == {"0": 0, "1": 1, "2": 1}


def test_minimal_wedge():
    status, doc = machine(["minimal", "wedge", "--stage", "3", "--cutoff", "1"])
    assert status == 0
    assert doc["checks"] and all(doc["checks"].values())


def test_dump_simplex_model_human(capsys):
    status, text = run(["dump-simplex-model", "2", "--N", "2"])
    assert status == 0
    assert "d a012 = a01 - a02 + a12" in text


def test_console_script_verify():
    out = subprocess.run([sys.executable, "-m", "lietower.cli", "verify", "--format", "machine"],
                         capture_output=True, text=True, timeout=600)
    assert out.returncode == 0, out.stderr
    assert json.loads(out.stdout)["ok"]
