import pandas as pd
import yaml
from click.testing import CliRunner

import constants
from cli import cli
from conftest import TOY_SCENARIO


def _write_config(tmp_path, data):
    path = tmp_path / "experiment.yaml"
    path.write_text(yaml.safe_dump(data))
    return path


def test_run_command(experiment_data, tmp_path):
    path = _write_config(tmp_path, experiment_data)
    result = CliRunner().invoke(cli, ["--no-db", "run", "--config", str(path), "--drops", "1"])
    assert result.exit_code == 0, result.output
    assert "Coord-egreedy-AVG" in result.output
    assert (tmp_path / "out" / constants.SUMMARY_FILE).exists()


def test_invalid_config_exits_with_2(experiment_data, tmp_path):
    path = _write_config(tmp_path, {**experiment_data, "strategy": "ucb"})
    result = CliRunner().invoke(cli, ["--no-db", "run", "--config", str(path)])
    assert result.exit_code == 2


def test_missing_scenario_exits_with_2(experiment_data, tmp_path):
    path = _write_config(tmp_path, {**experiment_data, "scenario": "nowhere.json"})
    result = CliRunner().invoke(cli, ["--no-db", "run", "--config", str(path)])
    assert result.exit_code == 2


def test_runtime_failure_exits_with_1(experiment_data, tmp_path, monkeypatch):
    def explode(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr("cli.run_experiment", explode)
    path = _write_config(tmp_path, experiment_data)
    result = CliRunner().invoke(cli, ["--no-db", "run", "--config", str(path)])
    assert result.exit_code == 1
    assert "boom" in result.output


def test_sweep_command(experiment_data, tmp_path):
    path = _write_config(tmp_path, {**experiment_data, "drops": 1})
    result = CliRunner().invoke(cli, [
        "--no-db", "sweep", "--config", str(path), "--strategies", "egreedy,static-dcf", "--rewards", "self,maxmin",
    ])
    assert result.exit_code == 0, result.output
    table = pd.read_csv(tmp_path / "out" / constants.SWEEP_FILE)
    assert set(table["label"]) == {"egreedy-SELF", "Coord-egreedy-MAXMIN", "DCF"}
    assert (tmp_path / "out" / "DCF" / constants.TRACE_FILE).exists()


def test_sweep_rejects_unknown_reward(experiment_data, tmp_path):
    path = _write_config(tmp_path, experiment_data)
    result = CliRunner().invoke(cli, ["--no-db", "sweep", "--config", str(path), "--rewards", "best"])
    assert result.exit_code == 2


def test_report_command(experiment_data, tmp_path):
    path = _write_config(tmp_path, experiment_data)
    runner = CliRunner()
    assert runner.invoke(cli, ["--no-db", "run", "--config", str(path)]).exit_code == 0
    result = runner.invoke(cli, ["--no-db", "report", "--in", str(tmp_path / "out")])
    assert result.exit_code == 0, result.output
    assert "jain_fairness" in result.output


def test_report_on_empty_directory_exits_with_2(tmp_path):
    result = CliRunner().invoke(cli, ["--no-db", "report", "--in", str(tmp_path)])
    assert result.exit_code == 2


def test_payoff_command(tmp_path):
    out = tmp_path / "payoff.json"
    result = CliRunner().invoke(cli, [
        "--no-db", "payoff", "--config", str(TOY_SCENARIO), "--out", str(out), "--iterations", "1", "--delta", "0.02",
    ])
    assert result.exit_code == 0, result.output
    assert out.exists()
