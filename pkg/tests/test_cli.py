import json
from pathlib import Path

import numpy as np
import pytest

from qfgur import cli

DATA = Path(__file__).resolve().parents[1] / "data"
R2 = 1 / np.sqrt(2)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    doc = json.loads(out)
    assert set(doc["manifest"]) >= {"command", "inputs", "seed", "tool_version", "timestamp"}
    return doc["result"]


class TestBounds:
    def test_qubit_file(self, capsys):
        res = run_json(capsys, "bounds", str(DATA / "pauli_zx.json"), "--alice", str(DATA / "pauli_zx.json"))
        assert res["steering_bound"] == 1.707106781187
        assert res["entanglement_bound"] == pytest.approx(3 - np.sqrt(2), abs=1e-12)

    def test_qutrit_builtin(self, capsys):
        res = run_json(capsys, "bounds", "--builtin", "gellmann-148")
        assert res["rutkowski_bound"] == 3.0
        assert res["steering_bound"] == 2.61803398875

    def test_spectrum(self, capsys):
        res = run_json(capsys, "--builtin", "pauli-zx", "bounds", "--spectrum", "0.5,0.5")
        assert res["spectrum_weighted"]["steering_bound_lambda"] == 1.0

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "bounds", "--builtin", "pauli-zx", "--format", "csv")
        lines = out.split("\n")
        assert code == 0 and lines[0].startswith("# manifest: {")
        assert lines[1] == "k,s_k,w_k"
        assert lines[3] == "2,1.707106781187,0.707106781187"
        assert "\r" not in out

    def test_non_orthonormal_file(self, capsys):
        code, _, err = run(capsys, "bounds", str(DATA / "broken_pauli.json"))
        assert code == 2
        assert "broken_pauli.json:26: measurements[1]: NonOrthonormal" in err

    def test_unknown_builtin(self, capsys):
        assert run(capsys, "bounds", "--builtin", "nope")[0] == 2

    def test_bad_spectrum_is_math_error(self, capsys):
        assert run(capsys, "bounds", "--builtin", "pauli-zx", "--spectrum", "0.9,0.9")[0] == 3

    def test_out_file_and_determinism(self, tmp_path, capsys):
        paths = [tmp_path / "a.json", tmp_path / "b.json"]
        for p in paths:
            assert cli.main(["bounds", "--builtin", "gellmann-148", "--seed", "4", "--out", str(p)]) == 0
        a, b = (json.loads(p.read_text()) for p in paths)
        assert a["result"] == b["result"]
        assert a["manifest"]["seed"] == 4


class TestWitness:
    def test_werner_0_8(self, capsys):
        res = run_json(capsys, "witness", "--werner", "qubit:0.8")
        assert res["steerable_flag"] and res["entangled_flag"]

    def test_werner_0_65_pairing(self, capsys):
        res = run_json(capsys, "witness", "--werner", "qubit:0.65", "--builtin", "pauli-zx", "--maximize-pairing")
        assert res["s_q"] == 1.65
        assert res["entangled_flag"] and not res["steerable_flag"]

    def test_state_file(self, capsys):
        res = run_json(
            capsys, "witness", str(DATA / "werner_qubit_0.65.json"),
            "--alice", str(DATA / "pauli_zx.json"), "--bob", str(DATA / "pauli_zx_anti.json"),
        )
        assert res["s_q"] == 1.65

    def test_product_state(self, capsys):
        res = run_json(capsys, "witness", str(DATA / "product_state.json"), "--builtin", "pauli-zx", "--maximize-pairing")
        assert not res["steerable_flag"] and not res["entangled_flag"]

    def test_missing_inputs(self, capsys):
        assert run(capsys, "witness")[0] == 2
        assert run(capsys, "witness", str(DATA / "product_state.json"))[0] == 2


class TestSweep:
    def test_default_grid(self, capsys):
        code, out, _ = run(capsys, "sweep-fig2")
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[1] == "theta,rutkowski,steering_bound,entanglement_bound"
        rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[2:]])
        assert rows.shape == (100, 4)
        assert np.all(np.diff(rows[:, 0]) > 0)
        assert rows[0, 2] == 3.0
        assert rows[-1, 0] == pytest.approx(np.pi / 2, abs=1e-11)
        assert np.all(rows[:, 3] <= rows[:, 2] + 1e-9) and np.all(rows[:, 2] <= rows[:, 1] + 1e-9)

    def test_range_errors(self, capsys):
        assert run(capsys, "sweep-fig2", "--theta-max", "4")[0] == 2
        assert run(capsys, "sweep-fig2", "--steps", "1")[0] == 2

    def test_ordering_failure_exits_4(self, capsys, monkeypatch):
        monkeypatch.setattr(cli.bounds, "rutkowski_bound", lambda m: 0.0)
        assert run(capsys, "sweep-fig2", "--steps", "3")[0] == 4

    def test_json_format(self, capsys):
        res = run_json(capsys, "sweep-fig2", "--steps", "2", "--theta-max", "pi", "--format", "json")
        assert [r["theta"] for r in res["rows"]] == [0.0, 3.14159265359]


class TestWerner:
    def test_qubit(self, capsys, tmp_path):
        sweep = tmp_path / "sweep.csv"
        res = run_json(capsys, "werner", "qubit", "--sweep-out", str(sweep))
        assert res["thresholds"] == {"steering": 0.7071068, "entanglement": 0.5857864, "rutkowski": 0.7071068}
        lines = sweep.read_text().split("\n")
        assert lines[1] == "p,s_q,steerable,entangled"
        assert len([ln for ln in lines[2:] if ln]) == 101

    def test_qutrit(self, capsys):
        res = run_json(capsys, "werner", "qutrit", "--grid", "5")
        assert res["thresholds"]["steering"] == 0.809017
        assert res["thresholds"]["entanglement"] == 0.763932
        assert res["thresholds"]["rutkowski"] == "none ≤ 1"
        assert len(res["sweep"]) == 5


class TestZeta:
    def test_classes(self, capsys):
        assert run_json(capsys, "zeta", "--builtin", "pauli-zx", "--outcomes", "0,0")["value"] == 0.75
        res = run_json(capsys, "zeta", "--builtin", "pauli-zx", "--outcomes", "0,0", "--class", "fgur")
        assert res["value"] == 0.853553390593
        res = run_json(capsys, "zeta", "--bob", str(DATA / "pauli_zx.json"), "--outcomes", "0,1", "--class", "separable")
        assert res["separable_le_quantum"] is True
        assert res["zeta_separable"] <= res["zeta_quantum"] + 1e-9

    def test_bad_outcomes(self, capsys):
        assert run(capsys, "zeta", "--builtin", "pauli-zx", "--outcomes", "a,b")[0] == 2
        assert run(capsys, "zeta", "--builtin", "pauli-zx", "--outcomes", "0,5")[0] == 3


class TestVerify:
    def test_steering_suite(self, capsys):
        res = run_json(capsys, "verify", "steering", "--samples", "100", "--seed", "42")
        assert res["passed"]

    def test_inflated_bound_file_passes(self, capsys):
        res = run_json(
            capsys, "verify", "all", "--samples", "100", "--builtin", "pauli-zx",
            "--bounds-file", str(DATA / "inflated_bounds_pauli_zx.json"),
        )
        assert res["passed"]

    def test_deflated_bound_file_fails(self, capsys, tmp_path):
        path = tmp_path / "tight.json"
        path.write_text(json.dumps({"result": {"steering_bound": 1.5}}))
        code, out, _ = run(capsys, "verify", "steering", "--samples", "200", "--builtin", "pauli-zx", "--bounds-file", str(path))
        assert code == 5
        assert json.loads(out)["result"]["worst"]["violations"] > 0

    def test_corrupted_measurements(self, capsys):
        assert run(capsys, "verify", "majorization", "--measurements", str(DATA / "broken_pauli.json"))[0] == 2

    def test_bounds_file_needs_set(self, capsys):
        assert run(capsys, "verify", "steering", "--bounds-file", str(DATA / "inflated_bounds_pauli_zx.json"))[0] == 2


def test_angle_parser():
    assert cli._angle("pi/2") == pytest.approx(np.pi / 2)
    assert cli._angle("3*pi/4") == pytest.approx(3 * np.pi / 4)
    assert cli._angle("0.25") == 0.25
