import functools
import logging
import os
import sys
from pathlib import Path

import click
from dotenv import load_dotenv
from tqdm import tqdm

import constants
from constants import InputValidationError
from coordination.rewards import RewardKind
from db.setup import setup
from environment.matrix_game import save_payoff_matrix
from environment.obss_env import derive_payoff_matrix
from harness.config import STRATEGIES, load_experiment
from harness.report import report
from harness.runner import run_experiment
from harness.seeds import stream
from harness.sweep import run_sweep
from scenario.loader import load_scenario
from utils.logging_config import setup_logging

logger = logging.getLogger(__name__)

EXIT_RUNTIME_ERROR = 1
EXIT_VALIDATION_ERROR = 2


def _handle_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except InputValidationError as e:
            logger.error(f"Invalid input: {e}")
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_VALIDATION_ERROR)
        except Exception as e:
            logger.exception(f"{func.__name__} failed")
            click.echo(f"error: {type(e).__name__}: {e}", err=True)
            sys.exit(EXIT_RUNTIME_ERROR)
    return wrapper


def _split(value: str):
    return [v.strip() for v in value.split(",") if v.strip()]


@click.group()
@click.option("--log-level", default=None, help=f"Overrides {constants.LOG_LEVEL_ENV_VAR}.")
@click.option("--db/--no-db", "use_db", default=True, help="Record runs in the results database.")
@click.pass_context
def cli(ctx, log_level, use_db):
    """Multi-agent bandit experiments for coordinated spatial reuse."""
    load_dotenv()
    session_maker = setup() if use_db else None
    setup_logging(session_maker, log_level)
    ctx.obj = {"session_maker": session_maker}


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--seed", type=int, default=None, help="Base seed.")
@click.option("--drops", type=int, default=None)
@click.option("--out", "out_dir", default=None)
@click.option("--workers", type=int, default=None, help=f"Defaults to {constants.WORKERS_ENV_VAR} or the CPU count.")
@click.pass_obj
@_handle_errors
def run(obj, config_path, seed, drops, out_dir, workers):
    """Run one experiment configuration."""
    config = load_experiment(config_path, base_seed=seed, drops=drops, out_dir=out_dir)
    summary = run_experiment(config, workers=workers, session_maker=obj["session_maker"])
    last = summary.summary[summary.summary["window"] == "last"]
    click.echo(f"{config.label} -> {config.out_dir}")
    click.echo(last.to_string(index=False))


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False))
@click.option("--strategies", default=",".join(STRATEGIES), show_default=True)
@click.option("--rewards", default=",".join(k.value for k in RewardKind), show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--drops", type=int, default=None)
@click.option("--out", "out_dir", default=None)
@click.option("--workers", type=int, default=None)
@click.pass_obj
@_handle_errors
def sweep(obj, config_path, strategies, rewards, seed, drops, out_dir, workers):
    """Run every (strategy, reward) combination and compare them."""
    try:
        kinds = [RewardKind(r.lower()) for r in _split(rewards)]
    except ValueError as e:
        raise InputValidationError(str(e)) from e
    base = load_experiment(config_path, base_seed=seed, drops=drops, out_dir=out_dir)
    for strategy in _split(strategies):
        if strategy not in STRATEGIES:
            raise InputValidationError(f"Unknown strategy: {strategy}")
    table = run_sweep(base, _split(strategies), kinds, workers=workers, session_maker=obj["session_maker"])
    click.echo(table.to_string(index=False))


@cli.command("report")
@click.option("--in", "in_dir", required=True, type=click.Path(file_okay=False))
@click.option("--out", "out_dir", default=None)
@_handle_errors
def report_command(in_dir, out_dir):
    """Re-aggregate the CSV tables of a finished run."""
    summary = report(in_dir, out_dir)
    click.echo(summary.summary.to_string(index=False))


@cli.command()
@click.option("--config", "scenario_path", required=True, type=click.Path(dir_okay=False), help="Scenario file.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--iterations", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--delta", "delta_s", type=float, default=constants.DELTA_S, show_default=True)
@_handle_errors
def payoff(scenario_path, out_path, iterations, seed, delta_s):
    """Tabulate the payoff matrix of a deployment on the simulator."""
    scenario = load_scenario(scenario_path)
    deployment = scenario.deployment(stream(seed, "deployment") if scenario.is_grid else None)
    action_space = scenario.action_space()
    total = len(action_space) ** len(deployment.bsses)
    with tqdm(total=total, desc="payoff", disable=not sys.stderr.isatty()) as bar:
        matrix = derive_payoff_matrix(
            deployment, action_space, iterations=iterations, seed=seed, duration_s=delta_s,
            progress=lambda _: bar.update(1),
        )
    save_payoff_matrix(matrix, Path(out_path))
    click.echo(f"Wrote {total} profiles to {out_path}")


@cli.command()
@click.option("--port", type=int, default=lambda: int(os.environ.get("PORT", 5000)))
def serve(port):
    """Serve the read-only results API."""
    from index import app

    app.run(host="0.0.0.0", port=port)


if __name__ == "__main__":
    cli()
