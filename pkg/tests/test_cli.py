import json
import os
import pathlib

import pytest

from tracemin import __version__
from tracemin.cli import main

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    payload = json.loads(out or err)
    return code, payload


class TestSolveGoldenFiles:
    def test_ky_fan(self, capsys):
        code, rep = run_json(capsys, "solve", str(FIXTURES / "kyfan.json"))
        assert code == 0
        assert rep["route"] == "definite-min"
        assert rep["finite"] and rep["attained"]
        assert rep["value"] == pytest.approx(3.0, abs=1e-12)
        assert rep["diagnostics"]["inertia_b"] == [3, 0, 0]
        assert rep["tool_version"] == __version__

    def test_indefinite_plus(self, capsys):
        code, rep = run_json(capsys, "solve", str(FIXTURES / "indefinite_plus.json"))
        assert code == 0
        assert rep["route"] == "indefinite-plus"
        assert rep["value"] == pytest.approx(1.0, abs=1e-9)
        d = rep["diagnostics"]
        assert d["inertia_b"] == [2, 0, 1]
        assert d["m0"] == 0
        assert -5.0 - 1e-8 <= d["lambda0"] <= 1.0 + 1e-8

    def test_unbounded(self, capsys):
        code, rep = run_json(capsys, "solve", str(FIXTURES / "unbounded.json"))
        assert code == 0
        assert rep["finite"] is False
        assert rep["value"] is None
        assert rep["attained"] is False

    def test_signature_coupled_d(self, capsys):
        code, rep = run_json(capsys, "solve", str(FIXTURES / "signature_coupled.json"))
        assert code == 2
        assert rep["error"]["code"] == "BLOCK_STRUCTURE_VIOLATED"

    def test_non_psd_pencil(self, capsys):
        code, rep = run_json(capsys, "solve", str(FIXTURES / "nonpsd.json"))
        assert code == 2
        assert rep["error"]["code"] == "NOT_PSD_PENCIL"

    def test_max_sense_indefinite(self, capsys):
        code, rep = run_json(capsys, "solve", str(FIXTURES / "maxsense.json"))
        assert code == 2
        assert rep["error"]["code"] == "UNSUPPORTED_SENSE"

    def test_bad_json(self, capsys):
        code, rep = run_json(capsys, "solve", str(FIXTURES / "bad.json"))
        assert code == 1
        assert rep["error"]["code"] == "PARSE_ERROR"

    def test_missing_file(self, capsys):
        code, rep = run_json(capsys, "solve", str(FIXTURES / "nope.json"))
        assert code == 1
        assert rep["error"]["code"] == "PARSE_ERROR"


def test_solve_with_optimizer(capsys):
    code, rep = run_json(
        capsys, "solve", str(FIXTURES / "kyfan.json"), "--optimizer"
    )
    assert code == 0
    assert "x_opt" in rep
    d = rep["diagnostics"]
    assert d["constraint_residual"] <= 1e-8
    assert d["objective_at_x_opt"] == pytest.approx(rep["value"], abs=1e-9)
    # complex entries are serialized as [re, im] pairs
    assert all(
        isinstance(e, list) and len(e) == 2 for row in rep["x_opt"] for e in row
    )


def test_json_output_bit_stable(capsys):
    outs = []
    for _ in range(2):
        code, out, _err = run(
            capsys, "solve", str(FIXTURES / "kyfan.json"), "--optimizer", "--seed", "7"
        )
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_text_mode_carries_same_numbers(capsys):
    _code, rep = run_json(capsys, "solve", str(FIXTURES / "indefinite_plus.json"))
    code, out, _err = run(
        capsys, "solve", str(FIXTURES / "indefinite_plus.json"), "--text"
    )
    assert code == 0
    lines = dict(
        line.split(" = ", 1) for line in out.strip().splitlines()
    )
    assert float(lines["value"]) == rep["value"]
    assert float(lines["diagnostics.lambda0"]) == rep["diagnostics"]["lambda0"]
    assert lines["finite"] == "True"


class TestPencil:
    def test_indefinite_example(self, capsys):
        code, rep = run_json(capsys, "pencil", str(FIXTURES / "indefinite_plus.json"))
        assert code == 0
        assert rep["inertia_b"] == [2, 0, 1]
        assert rep["diagonalizable"] is True
        assert rep["m0"] == 0
        assert rep["lambda_plus"] == pytest.approx([1.0, 2.0], abs=1e-9)
        assert rep["lambda_minus"] == pytest.approx([-5.0], abs=1e-9)

    def test_coupled_block(self, capsys, tmp_path):
        doc = {
            "a": [[0, 0], [0, 1]],
            "b": [[0, 1], [1, 0]],
            "d": [[1]],
            "constraint": "plus_identity",
        }
        path = tmp_path / "coupled.json"
        path.write_text(json.dumps(doc))
        code, rep = run_json(capsys, "pencil", str(path))
        assert code == 0
        assert rep["diagonalizable"] is False
        assert rep["m0"] == 1
        assert rep["lambda0"] == pytest.approx(0.0, abs=1e-6)

    def test_non_psd(self, capsys):
        code, rep = run_json(capsys, "pencil", str(FIXTURES / "nonpsd.json"))
        assert code == 2
        assert rep["error"]["code"] == "NOT_PSD_PENCIL"


class TestVerify:
    def test_pass_on_attained_instance(self, capsys):
        code, rep = run_json(capsys, "verify", str(FIXTURES / "kyfan.json"))
        assert code == 0
        assert rep["verdict"] == "PASS"
        assert -1e-8 <= rep["gap"] <= 1e-4
        assert rep["oracle"]["feasibility_residual"] <= 1e-8

    def test_pass_on_unbounded_instance(self, capsys):
        code, rep = run_json(
            capsys, "verify", str(FIXTURES / "unbounded.json"), "--iters", "2000"
        )
        assert code == 0
        assert rep["verdict"] == "PASS"
        assert rep["analytic"]["finite"] is False
        assert rep["oracle"]["unbounded_flag"] is True
        assert rep["gap"] is None

    def test_unsupported_instance_exits_2(self, capsys):
        code, rep = run_json(capsys, "verify", str(FIXTURES / "nonpsd.json"))
        assert code == 2
        assert rep["error"]["code"] == "NOT_PSD_PENCIL"


class TestCounterexample:
    def test_golden_values(self, capsys):
        code, rep = run_json(
            capsys, "counterexample", "--mu", "2", "--delta", "0.25"
        )
        assert code == 0
        assert rep["tau_star"] == pytest.approx(0.2987568425807008, abs=1e-12)
        assert rep["sigma_star_plus"] == pytest.approx(0.5140989589607083, abs=1e-12)
        assert rep["sigma_star_minus"] == pytest.approx(-0.5140989589607083, abs=1e-12)
        assert rep["f_min"] == pytest.approx(1.4142135623730951, abs=1e-14)
        assert rep["margin"] == pytest.approx(0.08578643762690485, abs=1e-14)
        assert rep["margin"] > 0

    def test_domain_guard(self, capsys):
        code, rep = run_json(
            capsys, "counterexample", "--mu", "0.5", "--delta", "0.25"
        )
        assert code == 1
        assert rep["error"]["code"] == "PARSE_ERROR"


def test_selftest(capsys):
    code, rep = run_json(capsys, "selftest")
    assert code == 0
    assert rep["verdict"] == "PASS"
    assert all(c["status"] == "PASS" for c in rep["checks"])


def test_seed_env_variable(capsys, monkeypatch):
    monkeypatch.setenv("TRACEMIN_SEED", "123")
    code, rep = run_json(capsys, "selftest")
    assert code == 0
    assert rep["verdict"] == "PASS"


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    assert __version__ in out
