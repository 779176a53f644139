import csv
import json

import pytest
from click.testing import CliRunner

from benney_cli.cli import cli, run
from benney_cli.utils.config import RunConfig

DNOIDAL = ["--family", "dnoidal", "--c", "1", "--beta", "0", "--sigma", "1", "--kappa", "0.5", "--grid-size", "64"]
UNSTABLE_SNOIDAL = ["--family", "snoidal", "--c", "1", "--beta", "1.01", "--sigma", "-1", "--kappa", "0.5", "--grid-size", "128"]


@pytest.fixture
def runner():
    return CliRunner()


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


class TestWaveCommand:
    def test_json_artifact(self, runner, tmp_path):
        out = tmp_path / "wave.json"
        result = runner.invoke(cli, ["wave", *DNOIDAL, "--out", str(out)])
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())
        assert data["parameters"]["family"] == "dnoidal"
        assert len(data["phi"]) == 64
        assert "phase" in data

    def test_csv_artifact(self, runner, tmp_path):
        out = tmp_path / "wave.csv"
        result = runner.invoke(cli, ["wave", *DNOIDAL, "--out", str(out), "--format", "csv"])
        assert result.exit_code == 0, result.output
        rows = read_csv(out)
        assert rows[0] == ["x", "phi", "dphi", "psi"]
        assert len(rows) == 65

    def test_identical_runs_are_byte_identical(self, runner, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        runner.invoke(cli, ["wave", *DNOIDAL, "--out", str(first)])
        runner.invoke(cli, ["wave", *DNOIDAL, "--out", str(second)])
        assert first.read_bytes() == second.read_bytes()

    def test_domain_error_exit_code(self, runner):
        """beta >= 1/c has no dnoidal wave: exit code 1."""
        args = ["wave", "--family", "dnoidal", "--c", "1", "--beta", "2", "--sigma", "1", "--kappa", "0.5"]
        result = runner.invoke(cli, args)
        assert result.exit_code == 1
        assert "1/c - beta > 0" in result.output

    def test_bad_flag_is_usage_error(self, runner):
        result = runner.invoke(cli, ["wave", *DNOIDAL[:-2], "--grid-size", "32"])
        assert result.exit_code == 2
        result = runner.invoke(cli, ["wave", "--family", "dnoidal", "--c", "fast"])
        assert result.exit_code == 2


class TestAnalysisCommands:
    def test_spectrum(self, runner, tmp_path):
        out = tmp_path / "spectrum.json"
        result = runner.invoke(cli, ["spectrum", *DNOIDAL, "--count", "3", "--out", str(out)])
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())
        assert set(data["operators"]) == {"L", "L1", "L2"}
        assert len(data["operators"]["L"]["eigenvalues"]) == 3
        assert data["morse"]["holds"] is True

    def test_dmatrix(self, runner, tmp_path):
        out = tmp_path / "d.json"
        result = runner.invoke(cli, ["dmatrix", *DNOIDAL, "--out", str(out)])
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())
        assert data["entries"][1][2] == 0.0
        assert data["n_d"] == 1

    def test_stability_unstable(self, runner, tmp_path):
        out = tmp_path / "stability.json"
        result = runner.invoke(cli, ["stability", *UNSTABLE_SNOIDAL, "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert "Unstable" in result.output
        data = json.loads(out.read_text())
        assert data["verdict"] == "unstable"
        assert data["k_ham"] == 3

    def test_stability_stable(self, runner, tmp_path):
        out = tmp_path / "stability.csv"
        result = runner.invoke(cli, ["stability", *DNOIDAL, "--out", str(out), "--format", "csv"])
        assert result.exit_code == 0, result.output
        rows = read_csv(out)
        assert rows[0] == ["family", "c", "beta", "sigma", "kappa", "nH", "nD", "kHam", "detD", "kReal", "maxRe", "verdict"]
        assert rows[1][-1] == "stable"


class TestSweepCommand:
    def test_row_count_is_product_size(self, runner, tmp_path):
        out = tmp_path / "sweep.csv"
        args = [
            "sweep", "--family", "dnoidal", "--c", "1", "--beta", "0,-0.5", "--sigma", "1",
            "--kappa", "0.3:0.6:2", "--grid-size", "64", "--out", str(out), "--format", "csv",
        ]
        result = runner.invoke(cli, args)
        assert result.exit_code == 0, result.output
        rows = read_csv(out)
        assert len(rows) == 1 + 4
        assert [r[2] for r in rows[1:]] == ["0", "0", "-0.5", "-0.5"]
        assert {r[-1] for r in rows[1:]} == {"stable"}

    def test_bad_range(self, runner):
        result = runner.invoke(cli, ["sweep", "--family", "dnoidal", "--c", "1", "--beta", "0",
                                     "--sigma", "1", "--kappa", "0.3:0.6"])
        assert result.exit_code == 2


class TestFiguresCommand:
    def test_files_and_signs(self, runner, tmp_path):
        result = runner.invoke(cli, ["figures", "--out", str(tmp_path), "--points", "25"])
        assert result.exit_code == 0, result.output
        expected_sign = {"d22_ratio.csv": "-1", "f_kappa.csv": "1", "h_kappa.csv": "1"}
        for name, sign in expected_sign.items():
            rows = read_csv(tmp_path / name)
            assert rows[0] == ["kappa", "value", "sign"]
            assert len(rows) == 26
            assert {r[2] for r in rows[1:]} == {sign}
            assert float(rows[1][0]) == 0.02
            assert float(rows[-1][0]) == 0.98


class TestSnoidalCommands:
    def test_asymptotics(self, runner, tmp_path):
        out = tmp_path / "asym.json"
        result = runner.invoke(cli, ["asymptotics", "--kappa", "0.5", "--epsilons", "1e-3,1e-4",
                                     "--grid-size", "128", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = json.loads(out.read_text())["rows"]
        assert [r["epsilon"] for r in rows] == [1e-3, 1e-4]
        assert all(r["asymptotic"] for r in rows)

    def test_continuation(self, runner, tmp_path):
        out = tmp_path / "cont.json"
        result = runner.invoke(cli, ["continuation", "--kappa", "0.8", "--epsilons", "0.1,0.02",
                                     "--grid-size", "128", "--out", str(out)])
        assert result.exit_code == 0, result.output
        data = json.loads(out.read_text())
        assert data["holds"] is True
        assert data["unstable_throughout"] is True
        assert [p["epsilon"] for p in data["points"]] == [0.1, 0.02]
        assert all("k_complex_quadruplets" in p for p in data["points"])


class TestConfigFile:
    def test_defaults_from_file(self, runner, tmp_path):
        """Values in --config act as defaults and explicit flags win."""
        config = tmp_path / "run.cfg"
        config.write_text("family = dnoidal\nc = 1\nbeta = 0\nsigma = 1\nkappa = 0.9\ngrid-size = 64\n")
        out = tmp_path / "wave.json"
        result = runner.invoke(cli, ["--config", str(config), "wave", "--kappa", "0.5", "--out", str(out)])
        assert result.exit_code == 0, result.output
        params = json.loads(out.read_text())["parameters"]
        assert params["kappa"] == 0.5
        assert params["family"] == "dnoidal"

    def test_unknown_key(self, runner, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("modulus = 0.5\n")
        result = runner.invoke(cli, ["--config", str(config), "wave", *DNOIDAL])
        assert result.exit_code == 1
        assert "unknown option" in result.output


class TestRun:
    def test_numerical_error_exit_code(self):
        """An under-resolved grid is a numerical failure: exit code 2."""
        config = RunConfig(command="wave", family="dnoidal", c=1.0, beta=0.0, sigma=1.0,
                           kappa=0.9999999, grid_size=64)
        assert run(config) == 2

    def test_success(self, tmp_path):
        config = RunConfig(command="wave", family="snoidal", c=1.0, beta=2.0, sigma=-1.0,
                           kappa=0.5, grid_size=64, out=str(tmp_path / "w.json"))
        assert run(config) == 0
