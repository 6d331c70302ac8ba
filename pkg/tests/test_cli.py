"""Tests for the command-line front end and its exit-code contract."""

import json
import math
import os

import pytest
from click.testing import CliRunner

from fracboussinesq.cli import main
from fracboussinesq.verification import VerificationReport


@pytest.fixture()
def runner():
    return CliRunner()


def _write_config(path, **overrides):
    cfg = {
        "problem": {
            "alpha": 1.5,
            "nu": 1.0,
            "T": 1.0,
            "K": 2,
            "spectrum": {"kind": "dirichlet_1d", "L": math.pi},
            "phi": {"coefficients": {"1": 1.0, "2": 0.3}},
        },
        "grid": {"time_points": 11, "sweep_points": 9, "alpha_grid": [1.5]},
        "seed": 7,
    }
    cfg.update(overrides)
    with open(path, "w") as fh:
        json.dump(cfg, fh)
    return cfg


class TestSolveCommand:
    def test_writes_artifacts_and_summary(self, runner, tmp_path):
        cfg_path = tmp_path / "config.json"
        _write_config(cfg_path)
        result = runner.invoke(main, ["solve", str(cfg_path)])
        assert result.exit_code == 0, result.output
        assert result.output.startswith("modes=2 tail_bound=0 max|u|=")
        series = (tmp_path / "series.csv").read_text().splitlines()
        assert series[0] == "t,T_1,T_2"
        ts = [float(line.split(",")[0]) for line in series[1:]]
        assert ts == sorted(ts)
        assert ts[0] == 0.0 and ts[-1] == 1.0
        sol = json.loads((tmp_path / "solution.json").read_text())
        assert {m["k"] for m in sol["modes"]} == {1, 2}
        for key in ("lambda_k", "nu_k_sq", "E1", "E2", "E3", "D_k", "a_k", "b_k", "phi_k"):
            assert key in sol["modes"][0]

    def test_zero_data_zero_series(self, runner, tmp_path):
        cfg_path = tmp_path / "config.json"
        cfg = _write_config(cfg_path)
        cfg["problem"]["phi"] = {"coefficients": {}}
        cfg_path.write_text(json.dumps(cfg))
        result = runner.invoke(main, ["solve", str(cfg_path)])
        assert result.exit_code == 0
        assert "max|u|=0" in result.output
        rows = (tmp_path / "series.csv").read_text().splitlines()[1:]
        assert all(float(c) == 0.0 for row in rows for c in row.split(",")[1:])

    def test_missing_field_exits_two(self, runner, tmp_path):
        cfg_path = tmp_path / "config.json"
        cfg = _write_config(cfg_path)
        del cfg["problem"]["alpha"]
        cfg_path.write_text(json.dumps(cfg))
        result = runner.invoke(main, ["solve", str(cfg_path)])
        assert result.exit_code == 2
        assert "problem.alpha" in result.output

    def test_missing_config_exits_two(self, runner, tmp_path):
        result = runner.invoke(main, ["solve", str(tmp_path / "absent.json")])
        assert result.exit_code == 2

    def test_reproducible_outputs(self, runner, tmp_path):
        cfg_path = tmp_path / "config.json"
        _write_config(cfg_path)
        assert runner.invoke(main, ["solve", str(cfg_path)]).exit_code == 0
        first = (tmp_path / "series.csv").read_bytes(), (tmp_path / "solution.json").read_bytes()
        assert runner.invoke(main, ["solve", str(cfg_path)]).exit_code == 0
        second = (tmp_path / "series.csv").read_bytes(), (tmp_path / "solution.json").read_bytes()
        assert first == second

    def test_sampled_csv_input(self, runner, tmp_path):
        import numpy as np

        xs = np.linspace(0.0, math.pi, 200)
        (tmp_path / "phi.csv").write_text(
            "\n".join(f"{x},{math.sin(x)}" for x in xs)
        )
        cfg_path = tmp_path / "config.json"
        cfg = _write_config(cfg_path)
        cfg["problem"]["phi"] = {"csv": "phi.csv"}
        cfg["problem"]["K"] = 1
        cfg_path.write_text(json.dumps(cfg))
        result = runner.invoke(main, ["solve", str(cfg_path)])
        assert result.exit_code == 0, result.output
        sol = json.loads((tmp_path / "solution.json").read_text())
        assert sol["modes"][0]["phi_k"] == pytest.approx(math.sqrt(math.pi / 2), rel=1e-7)


class TestVerifyCommand:
    def test_clean_run_exits_zero_and_writes_reports(self, runner, tmp_path):
        cfg_path = tmp_path / "config.json"
        _write_config(cfg_path)
        result = runner.invoke(main, ["verify", str(cfg_path)])
        assert result.exit_code == 0, result.output
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["all_passed"] is True
        assert (tmp_path / "report.txt").read_text().strip()

    def test_failing_check_exits_one(self, runner, tmp_path, monkeypatch):
        import fracboussinesq.runner as runner_mod

        def fake_verify(sol, t_grid_interior=None, **kwargs):
            rep = VerificationReport()
            rep.add("planted_failure", {}, 1.0, 0.5, False)
            return rep

        monkeypatch.setattr(runner_mod, "verify_solution", fake_verify)
        cfg_path = tmp_path / "config.json"
        _write_config(cfg_path)
        result = runner.invoke(main, ["verify", str(cfg_path)])
        assert result.exit_code == 1
        assert "planted_failure" in result.output

    def test_empty_report_exits_three(self, runner, tmp_path, monkeypatch):
        import fracboussinesq.cli as cli_mod

        def fake_run_verify(*args, **kwargs):
            return VerificationReport().finalize()

        monkeypatch.setattr(cli_mod, "run_verify", fake_run_verify)
        cfg_path = tmp_path / "config.json"
        _write_config(cfg_path)
        result = runner.invoke(main, ["verify", str(cfg_path)])
        assert result.exit_code == 3


class TestResonanceCommand:
    def test_csv_to_stdout(self, runner):
        result = runner.invoke(
            main,
            ["resonance", "--nu", str(2 * math.pi), "--t", "1.0", "--alpha-list", "1.5,1.9", "--points", "4"],
        )
        assert result.exit_code == 0
        lines = result.output.strip().splitlines()
        assert lines[0] == "alpha,x,D"
        alphas = {line.split(",")[0] for line in lines[1:]}
        assert alphas == {"1.5", "1.8999999999999999", "2"}

    def test_output_file(self, runner, tmp_path):
        out = tmp_path / "res.csv"
        result = runner.invoke(
            main, ["resonance", "--nu", "3.14159", "--t", "1.0", "--points", "3", "--output", str(out)]
        )
        assert result.exit_code == 0
        assert out.read_text().startswith("alpha,x,D")

    def test_zero_points_is_usage_error(self, runner):
        result = runner.invoke(main, ["resonance", "--nu", "1", "--t", "1", "--points", "0"])
        assert result.exit_code == 2

    def test_bad_alpha_list_is_usage_error(self, runner):
        result = runner.invoke(
            main, ["resonance", "--nu", "1", "--t", "1", "--alpha-list", "abc"]
        )
        assert result.exit_code == 2


class TestMlCommand:
    def test_prints_seventeen_digit_value(self, runner):
        result = runner.invoke(main, ["ml", "--rho", "1", "--mu", "1", "--z", "-1"])
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "0.36787944117144233"

    def test_positive_argument_exits_two(self, runner):
        result = runner.invoke(main, ["ml", "--rho", "1.5", "--mu", "1", "--z", "0.5"])
        assert result.exit_code == 2

    def test_oracle_cross_check(self, runner):
        result = runner.invoke(
            main, ["ml", "--rho", "1.5", "--mu", "1", "--z", "-2", "--oracle", "200"]
        )
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert lines[1].startswith("oracle[series] 0.0294306856028264717")
        rel = float(lines[2].split()[1])
        assert rel <= 1e-12


class TestBoundsCommand:
    def test_pass_run(self, runner, tmp_path):
        out = tmp_path / "bounds.json"
        result = runner.invoke(
            main,
            ["bounds", "--alpha-list", "1.5", "--t-min", "1e-2", "--t-max", "1e2", "--points", "9", "--output", str(out)],
        )
        assert result.exit_code == 0, result.output
        assert json.loads(out.read_text())["all_passed"] is True

    def test_bad_range_exits_two(self, runner):
        result = runner.invoke(main, ["bounds", "--t-min", "10", "--t-max", "1"])
        assert result.exit_code == 2


class TestThreadsEnv:
    def test_thread_cap_respected_in_solve(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("FRACB_THREADS", "2")
        cfg_path = tmp_path / "config.json"
        _write_config(cfg_path)
        result = runner.invoke(main, ["solve", str(cfg_path)])
        assert result.exit_code == 0
