"""Command-line interface: emitted files, determinism, exit codes."""

import json

import numpy as np
import pytest

from ptwa.cli import main


def read_lines(path):
    return path.read_text().splitlines()


class TestUsageErrors:
    def test_negative_lambda(self, capsys):
        assert main(["gci", "--lambda", "-1"]) == 1

    def test_unknown_command(self):
        assert main(["frobnicate"]) == 1

    def test_empty_alpha_range(self):
        assert main(["coeffs", "--alpha-range", ""]) == 1

    def test_bad_range_spec(self):
        assert main(["residual", "--lambda", "1:2"]) == 1


class TestGci:
    def test_writes_files_and_reports(self, tmp_path, capsys):
        out = tmp_path / "run"
        code = main(
            ["gci", "--lambda", "1", "--alpha", "1", "-m", "6", "-n", "13", "--out", str(out)]
        )
        assert code == 0
        captured = capsys.readouterr().out
        assert "algebraic residual" in captured and "condition estimate" in captured
        coeffs = read_lines(tmp_path / "run_coeffs.csv")
        psi = read_lines(tmp_path / "run_psi.csv")
        assert coeffs[0].startswith("# config:") and coeffs[1] == "j,k,re,im"
        assert psi[0].startswith("# config:") and psi[1] == "theta,kappa,value"
        assert len(coeffs) == 2 + 13 * 14  # (2m+1)(n+1) coefficient rows

    def test_even_m_accepted(self, tmp_path):
        # even truncation widths are legitimate (the reference resolutions are even)
        assert main(["gci", "-m", "4", "-n", "9", "--out", str(tmp_path / "x")]) == 0


class TestResidual:
    def test_sweep_csv(self, tmp_path):
        out = tmp_path / "res.csv"
        code = main(
            ["residual", "--lambda", "0.5,1", "--alpha", "1,2", "-m", "6", "-n", "13",
             "--out", str(out)]
        )
        assert code == 0
        lines = read_lines(out)
        assert lines[1] == "lambda,alpha,residual_inf"
        assert len(lines) == 2 + 4

    def test_range_syntax(self, tmp_path):
        out = tmp_path / "res.csv"
        code = main(
            ["residual", "--lambda", "1", "--alpha", "0.5:1.5:0.5", "-m", "6", "-n", "13",
             "--out", str(out)]
        )
        assert code == 0
        assert len(read_lines(out)) == 2 + 3


class TestCoeffs:
    def test_sweep_and_c1_column(self, tmp_path):
        from ptwa.equilibrium import ModelParams, c1_coefficient

        out = tmp_path / "c.csv"
        code = main(
            ["coeffs", "--lambda", "1", "--alpha-range", "0.8:1.2:0.2", "-m", "6", "-n", "13",
             "--out", str(out)]
        )
        assert code == 0
        lines = read_lines(out)
        assert lines[1] == "lambda,alpha,c1,c2,gamma1,gamma2,d"
        assert len(lines) == 2 + 3
        for row in lines[2:]:
            lam, alpha, c1, c2, g1, g2, d = (float(v) for v in row.split(","))
            assert c1 == pytest.approx(c1_coefficient(ModelParams(lam, alpha)), rel=1e-12)
            assert d == pytest.approx(alpha**2 / lam**2)
            assert c2 == pytest.approx(g2 / g1, rel=1e-12)


class TestSimulate:
    def write_config(self, tmp_path, **overrides):
        cfg = dict(
            n_agents=20, box=5.0, radius=10.0, dt=0.05, t_final=2.0, seed=3, stride=10,
            include_self=True,
        )
        cfg["lambda"] = 1.0
        cfg["alpha"] = 1.0
        cfg.update(overrides)
        path = tmp_path / "sim.json"
        path.write_text(json.dumps(cfg))
        return path

    def test_stats_and_trajectory(self, tmp_path, capsys):
        cfg = self.write_config(tmp_path)
        out = tmp_path / "stats.csv"
        traj = tmp_path / "traj.csv"
        code = main(["simulate", "--config", str(cfg), "--out", str(out), "--traj", str(traj)])
        assert code == 0
        captured = capsys.readouterr().out
        assert "order parameter" in captured and "curvature variance" in captured
        stats = read_lines(out)
        assert stats[1] == "t,order_parameter,mean_direction,curvature_variance"
        rows = read_lines(traj)
        assert rows[1] == "t,agent_id,x1,x2,theta,kappa"
        assert len(rows) == 2 + 4 * 20  # 40 steps / stride 10 dumps x 20 agents

    def test_single_agent_order_parameter(self, tmp_path):
        cfg = self.write_config(tmp_path, n_agents=1)
        out = tmp_path / "stats.csv"
        assert main(["simulate", "--config", str(cfg), "--out", str(out)]) == 0
        for row in read_lines(out)[2:]:
            assert float(row.split(",")[1]) == pytest.approx(1.0)

    def test_malformed_json(self, tmp_path):
        bad = tmp_path / "sim.json"
        bad.write_text("{not json")
        assert main(["simulate", "--config", str(bad)]) == 1

    def test_missing_field(self, tmp_path):
        bad = tmp_path / "sim.json"
        bad.write_text(json.dumps({"n_agents": 5}))
        assert main(["simulate", "--config", str(bad)]) == 1


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv_builder",
        [
            lambda d: ["gci", "-m", "5", "-n", "9", "--out", str(d / "g")],
            lambda d: ["residual", "--lambda", "1", "--alpha", "1", "-m", "5", "-n", "9",
                       "--out", str(d / "r.csv")],
            lambda d: ["coeffs", "--lambda", "1", "--alpha-range", "1.0:1.0:1.0", "-m", "5",
                       "-n", "9", "--out", str(d / "c.csv")],
        ],
    )
    def test_rerun_is_bit_identical(self, tmp_path, argv_builder):
        d1 = tmp_path / "a"
        d2 = tmp_path / "b"
        d1.mkdir()
        d2.mkdir()
        assert main(argv_builder(d1)) == 0
        assert main(argv_builder(d2)) == 0
        for f1 in sorted(d1.iterdir()):
            f2 = d2 / f1.name
            assert f1.read_bytes() == f2.read_bytes()

    def test_simulate_deterministic(self, tmp_path):
        cfg = dict(
            n_agents=15, box=5.0, radius=10.0, dt=0.05, t_final=1.0, seed=3, stride=5
        )
        cfg["lambda"] = 1.0
        cfg["alpha"] = 1.0
        path = tmp_path / "sim.json"
        path.write_text(json.dumps(cfg))
        outs = []
        for name in ("s1.csv", "s2.csv"):
            out = tmp_path / name
            assert main(["simulate", "--config", str(path), "--out", str(out)]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
