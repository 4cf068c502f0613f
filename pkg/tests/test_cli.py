"""Tests for the command-line surface: artifacts, exit codes, determinism."""
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qneuron.cli import main

PI = math.pi
THETA4 = [PI / 6, PI / 3, PI / 2, PI / 5]
PHI4 = [PI / 2, PI / 8, 0.0, 0.0]
THETA3 = [PI / 7, PI / 3, PI / 2]
PHI3 = [PI / 2, PI / 8, PI / 6]


def write_json(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def run_cli(args):
    return main([str(a) for a in args])


# --- rescale ---

def test_rescale_to_stdout(capsys):
    assert run_cli(["rescale", "--input", "[0, 5, 10]"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["angles"] == pytest.approx([0.0, PI / 2, PI])
    assert payload["degenerate"] is False


def test_rescale_csv(tmp_path):
    out = tmp_path / "angles.csv"
    assert run_cli(["rescale", "--input", "[1, 3]", "--format", "csv", "--out", out]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "index,angle"
    assert len(lines) == 3


# --- synth ---

def test_synth_writes_circuit_and_sidecar(tmp_path):
    out = tmp_path / "circuit.txt"
    beta = write_json(tmp_path / "beta.json", [0.3, -0.1, 0.7, 0.2])
    assert run_cli(["synth", "--algorithm", "hadamard", "--beta", beta,
                    "--optimize", "--out", out]) == 0
    text = out.read_text()
    assert text.count("rz(") == 3 and text.count("cx ") == 2 and "gphase(" in text
    sidecar = json.loads((tmp_path / "circuit.txt.json").read_text())
    assert sidecar["gate_counts"] == {"cx": 2, "gphase": 1, "rz": 3}
    assert len(sidecar["alpha"]) == 4


def test_synth_gray_counts(tmp_path):
    out = tmp_path / "gray.txt"
    assert run_cli(["synth", "--algorithm", "gray", "--beta", "[0.5, 1.5]",
                    "--out", out]) == 0
    sidecar = json.loads((tmp_path / "gray.txt.json").read_text())
    assert sidecar["gate_counts"] == {"cx": 2, "rz": 2}
    assert sidecar["num_wires"] == 2


def test_synth_rejects_bad_dimension(tmp_path, capsys):
    assert run_cli(["synth", "--algorithm", "gray", "--beta", "[1, 2, 3]"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert "power of two" in err["error"]


# --- mesh ---

def test_mesh_schema(tmp_path):
    out = tmp_path / "mesh.json"
    c = [0.5, 0.5, 0.5, 0.5]
    assert run_cli(["mesh", "--amplitudes", write_json(tmp_path / "c.json", c),
                    "--out", out]) == 0
    data = json.loads(out.read_text())
    assert set(data) == {"modes", "layers", "phase_layer", "permutation"}
    assert data["modes"] == 4
    assert sum(len(layer) for layer in data["layers"]) == 3
    assert sorted(data["permutation"]) == [0, 1, 2, 3]


def test_mesh_rejects_unnormalized(capsys):
    assert run_cli(["mesh", "--amplitudes", "[1, 1]"]) == 2
    assert "norm" in json.loads(capsys.readouterr().err)["error"]


# --- run-qubit / run-optical ---

def test_run_qubit_report(tmp_path):
    out = tmp_path / "report.json"
    code = run_cli(["run-qubit",
                    "--input", write_json(tmp_path / "x.json", THETA4),
                    "--weight", write_json(tmp_path / "w.json", PHI4),
                    "--rescaled", "--algorithm", "gray", "--paper-count",
                    "--shots", 100000, "--seed", 11, "--out", out])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["p1"] == pytest.approx(0.386, abs=1e-3)
    assert report["analytic"] == pytest.approx(report["p1"], abs=1e-9)
    assert report["cost"] == {"size": 14, "depth": 11, "width": 3}
    assert report["histogram"]["shots"] == 100000
    assert sum(report["histogram"]["counts"]) == 100000
    assert (tmp_path / "report.png").is_file()


def test_run_qubit_without_rescaled_flag_rescales(tmp_path, capsys):
    # raw inputs are mapped onto [0, pi] before encoding
    assert run_cli(["run-qubit", "--input", "[0, 1, 2, 3]",
                    "--weight", "[3, 1, 0, 2]"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["theta"] == pytest.approx([0, PI / 3, 2 * PI / 3, PI])


def test_run_optical_report(tmp_path):
    out = tmp_path / "optical.json"
    code = run_cli(["run-optical",
                    "--input", write_json(tmp_path / "x.json", THETA3),
                    "--weight", write_json(tmp_path / "w.json", PHI3),
                    "--rescaled", "--shots", 2000, "--out", out])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["probability"] == pytest.approx(0.368, abs=1e-3)
    assert report["cost"] == {"size": 4, "depth": 6, "width": math.log2(3)}
    assert len(report["mode_probabilities"]) == 3
    assert sum(report["histogram"]["counts"]) == 2000
    assert (tmp_path / "optical.png").is_file()


def test_run_qubit_missing_weight(capsys):
    assert run_cli(["run-qubit", "--input", "[1, 2]"]) == 2
    assert "required" in json.loads(capsys.readouterr().err)["error"]


def test_malformed_json_exits_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2,", encoding="utf-8")
    assert run_cli(["run-optical", "--input", bad, "--weight", "[1, 2]"]) == 2
    assert "malformed JSON" in json.loads(capsys.readouterr().err)["error"]


def test_dimension_mismatch_exits_two(capsys):
    assert run_cli(["run-qubit", "--input", "[1, 2]", "--weight", "[1, 2, 3]",
                    "--rescaled"]) == 2
    assert "mismatch" in json.loads(capsys.readouterr().err)["error"]


# --- compare ---

def test_compare_single_pair(tmp_path):
    out = tmp_path / "compare.json"
    code = run_cli(["compare",
                    "--input", write_json(tmp_path / "x.json", THETA4),
                    "--weight", write_json(tmp_path / "w.json", PHI4),
                    "--rescaled", "--out", out])
    assert code == 0
    report = json.loads(out.read_text())
    for result in report["results"].values():
        assert result["probability"] == pytest.approx(0.386, abs=1e-3)
    assert report["max_deviation"] < 1e-9
    assert (tmp_path / "compare.png").is_file()


def test_compare_batch_csv(tmp_path):
    pairs = [
        {"input": THETA4, "weight": PHI4},
        [THETA3, PHI3],
    ]
    out = tmp_path / "summary.csv"
    code = run_cli(["compare", "--batch", write_json(tmp_path / "pairs.json", pairs),
                    "--rescaled", "--format", "csv", "--out", out])
    assert code == 0
    lines = out.read_text().splitlines()
    header = lines[0].split(",")
    assert header[:5] == ["n", "analytic", "p_qubit_gray", "p_qubit_hadamard", "p_optical"]
    assert len(header) == 14
    assert len(lines) == 3
    first = lines[1].split(",")
    assert first[0] == "4"
    assert float(first[1]) == pytest.approx(0.386, abs=1e-3)


# --- cost ---

def test_cost_of_exported_neuron_circuit(tmp_path, capsys):
    from qneuron import GRAY, build_neuron_circuit, export_text

    circuit = build_neuron_circuit(np.asarray(THETA4), np.asarray(PHI4), GRAY)
    path = tmp_path / "neuron.txt"
    path.write_text(export_text(circuit), encoding="utf-8")
    assert run_cli(["cost", "--circuit", path, "--paper-count"]) == 0
    assert json.loads(capsys.readouterr().out) == {"size": 14, "depth": 11, "width": 3}
    assert run_cli(["cost", "--circuit", path]) == 0
    assert json.loads(capsys.readouterr().out) == {"size": 15, "depth": 11, "width": 3}


def test_cost_missing_file(capsys):
    assert run_cli(["cost", "--circuit", "/nonexistent.txt"]) == 2
    capsys.readouterr()


def test_env_seed_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("QNEURON_SEED", "321")
    out = tmp_path / "r.json"
    run_cli(["run-qubit", "--input", "[1, 2, 3, 4]", "--weight", "[4, 3, 2, 1]",
             "--shots", 10, "--out", out, "--no-figure"])
    assert json.loads(out.read_text())["histogram"]["seed"] == 321
    monkeypatch.setenv("QNEURON_SEED", "not-a-number")
    assert run_cli(["run-qubit", "--input", "[1, 2]", "--weight", "[2, 1]",
                    "--shots", 10]) == 2


# --- determinism and process-level behavior ---

def test_unknown_flag_exits_two():
    proc = subprocess.run(
        [sys.executable, "-m", "qneuron.cli", "rescale", "--input", "[1,2]", "--bogus"],
        capture_output=True,
    )
    assert proc.returncode == 2


def test_entry_point_help():
    proc = subprocess.run(
        [sys.executable, "-m", "qneuron.cli", "compare", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "radians" in proc.stdout


def test_repeated_runs_are_byte_identical(tmp_path):
    x = write_json(tmp_path / "x.json", THETA4)
    w = write_json(tmp_path / "w.json", PHI4)
    artifacts = []
    for tag in ("a", "b"):
        base = tmp_path / tag
        base.mkdir()
        run_cli(["run-qubit", "--input", x, "--weight", w, "--rescaled",
                 "--shots", 5000, "--seed", 42, "--out", base / "q.json"])
        run_cli(["compare", "--input", x, "--weight", w, "--rescaled",
                 "--out", base / "c.json"])
        artifacts.append({
            p.name: p.read_bytes() for p in sorted(base.iterdir())
        })
    assert artifacts[0].keys() == artifacts[1].keys()
    for name in artifacts[0]:
        assert artifacts[0][name] == artifacts[1][name], name
