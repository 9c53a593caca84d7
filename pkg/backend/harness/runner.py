import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

import constants
from bandit.agents import BanditAgent, EpsilonGreedyAgent, StaticAgent, ThompsonSamplingAgent
from constants import ConfigurationError, SimulationError
from coordination.rewards import distribute
from environment.base import Environment, env_step
from environment.matrix_game import DEFAULT_TOY_PAYOFF, MatrixGameEnv, load_payoff_matrix
from environment.obss_env import ObssSimEnv
from harness import ledger
from harness.config import ExperimentConfig
from harness.export import export, write_manifest
from harness.seeds import agent_seed, drop_seed, stream
from harness.summary import RunSummary, summarize
from scenario.loader import ScenarioFile, load_scenario
from scenario.models import ActionSpace
from utils.logging_config import detach_database_handlers

logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_FAILED = "failed"


@dataclass
class DropOutcome:
    drop: int
    seed: int
    status: str
    trace: Optional[pd.DataFrame] = None
    error: Optional[str] = None


def build_environment(config: ExperimentConfig, scenario: ScenarioFile, action_space: ActionSpace, seed: int) -> Environment:
    if config.environment == constants.ENV_MATRIX:
        matrix = load_payoff_matrix(config.payoff or DEFAULT_TOY_PAYOFF)
        if matrix.n_actions != len(action_space):
            raise ConfigurationError(
                f"Payoff matrix has {matrix.n_actions} actions, scenario defines {len(action_space)}"
            )
        return MatrixGameEnv(matrix)
    deployment = scenario.deployment(stream(seed, "deployment") if scenario.is_grid else None)
    return ObssSimEnv(deployment, action_space, config.delta_s)


def _static_arm(config: ExperimentConfig, action_space: ActionSpace) -> int:
    power, pd_dbm = (
        constants.STATIC_OBSSPD_ACTION
        if config.strategy == constants.STRATEGY_STATIC_OBSSPD
        else constants.STATIC_DCF_ACTION
    )
    arm = action_space.index_of(power, pd_dbm)
    if arm is None:
        raise ConfigurationError(f"Baseline {config.strategy} needs action ({power} dBm, {pd_dbm} dBm) in the action space")
    return arm


def build_agents(config: ExperimentConfig, n_agents: int, action_space: ActionSpace, seed: int) -> List[BanditAgent]:
    n_arms = len(action_space)
    agents = []
    for p in range(n_agents):
        rng = stream(agent_seed(seed, p))
        if config.strategy == constants.STRATEGY_EGREEDY:
            agents.append(EpsilonGreedyAgent(n_arms, rng, config.eps0, config.exploit_statistic, config.warmup_rounds))
        elif config.strategy == constants.STRATEGY_THOMPSON:
            agents.append(ThompsonSamplingAgent(n_arms, rng, config.literal_denominator))
        else:
            agents.append(StaticAgent(n_arms, rng, _static_arm(config, action_space)))
    return agents


def run_drop(config: ExperimentConfig, drop: int) -> pd.DataFrame:
    """Run the learning loop for one drop and return its trace rows."""
    seed = drop_seed(config.base_seed, drop)
    scenario = load_scenario(config.scenario)
    action_space = scenario.action_space()
    env = build_environment(config, scenario, action_space, seed)
    agents = build_agents(config, env.n_agents, action_space, seed)
    env_rng = stream(seed, "environment")
    strategy = config.reward_strategy

    T, P = config.iterations, env.n_agents
    actions = np.zeros((T, P), dtype=np.int64)
    rewards = np.zeros((T, P))
    metrics = np.full((T, P, 4), np.nan)

    pending = None
    for t in range(T):
        # the reward of iteration t-1 arrives before iteration t selects
        if pending is not None:
            for agent, reward in zip(agents, pending):
                agent.observe(reward)
        joint = [agent.act() for agent in agents]
        step = env_step(env, joint, env_rng)
        pending = distribute(strategy, step)

        actions[t] = joint
        rewards[t] = pending
        if step.metrics is not None:
            metrics[t] = [
                (m.throughput_mbps, m.airtime_frac, m.mean_access_delay_ms, m.nav_frac) for m in step.metrics
            ]
    for agent, reward in zip(agents, pending):
        agent.observe(reward)

    for p, agent in enumerate(agents):
        if int(agent.state.counts.sum()) != T:
            raise SimulationError(f"Agent {p} completed {agent.state.counts.sum()} updates, expected {T}")

    return pd.DataFrame({
        "drop": drop,
        "iter": np.repeat(np.arange(1, T + 1), P),
        "agent": np.tile(np.arange(P), T),
        "action": actions.ravel(),
        "reward": rewards.ravel(),
        "throughput_mbps": metrics[:, :, 0].ravel(),
        "airtime_frac": metrics[:, :, 1].ravel(),
        "delay_ms": metrics[:, :, 2].ravel(),
        "nav_frac": metrics[:, :, 3].ravel(),
    })


def _drop_task(config: ExperimentConfig, drop: int) -> DropOutcome:
    seed = drop_seed(config.base_seed, drop)
    try:
        return DropOutcome(drop, seed, STATUS_OK, trace=run_drop(config, drop))
    except Exception as e:
        return DropOutcome(drop, seed, STATUS_FAILED, error=f"{type(e).__name__}: {e}")


def _worker_count(requested: Optional[int], n_drops: int) -> int:
    workers = requested or int(os.environ.get(constants.WORKERS_ENV_VAR, 0)) or os.cpu_count() or 1
    return max(1, min(workers, n_drops))


def run_drops(config: ExperimentConfig, n_drops: int, workers: Optional[int] = None) -> List[DropOutcome]:
    """Run every drop, in parallel when more than one worker is available; results come back in drop order."""
    workers = _worker_count(workers, n_drops)
    show = sys.stderr.isatty()
    outcomes: Dict[int, DropOutcome] = {}
    if workers == 1:
        for drop in tqdm(range(n_drops), desc=config.label, disable=not show):
            outcomes[drop] = _drop_task(config, drop)
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=detach_database_handlers) as pool:
            futures = [pool.submit(_drop_task, config, drop) for drop in range(n_drops)]
            for future in tqdm(as_completed(futures), total=n_drops, desc=config.label, disable=not show):
                outcome = future.result()
                outcomes[outcome.drop] = outcome
    return [outcomes[d] for d in range(n_drops)]


def drop_count(config: ExperimentConfig, scenario: ScenarioFile) -> int:
    if config.drops is not None:
        return config.drops
    return scenario.grid.drops if scenario.is_grid else 1


def build_manifest(config: ExperimentConfig, scenario: ScenarioFile, n_drops: int) -> dict:
    action_space = scenario.action_space()
    return {
        "label": config.label,
        "config": config.model_dump(mode="json"),
        "iterations": config.iterations,
        "drops": n_drops,
        "drop_seeds": [str(drop_seed(config.base_seed, d)) for d in range(n_drops)],
        "actions": [
            {"index": k, "label": ActionSpace.name(k), "tx_power_dbm": a.tx_power_dbm, "pd_dbm": a.pd_dbm}
            for k, a in enumerate(action_space)
        ],
        "scenario": scenario.model_dump(mode="json"),
        "trace_columns": list(constants.TRACE_COLUMNS),
    }


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None, session_maker=None) -> RunSummary:
    """Run all drops of an experiment, write its result files and return the summary."""
    scenario = load_scenario(config.scenario)
    action_space = scenario.action_space()
    n_drops = drop_count(config, scenario)
    out_dir = Path(config.out_dir)
    # configuration mistakes must fail here, not once per drop
    if config.is_static:
        _static_arm(config, action_space)
    if config.environment == constants.ENV_MATRIX:
        build_environment(config, scenario, action_space, drop_seed(config.base_seed, 0))

    manifest = build_manifest(config, scenario, n_drops)
    write_manifest(manifest, out_dir)
    run_id = ledger.start_run(session_maker, config, manifest) if session_maker is not None else None
    log = logging.LoggerAdapter(logger, {"run_id": run_id})
    log.info(f"Starting {config.label}: {n_drops} drop(s) x {config.iterations} iterations -> {out_dir}")

    try:
        outcomes = run_drops(config, n_drops, workers)
        for outcome in outcomes:
            if outcome.status != STATUS_OK:
                log.error(f"Drop {outcome.drop} aborted: {outcome.error}")
        traces = [o.trace for o in outcomes if o.status == STATUS_OK]
        if not traces:
            raise SimulationError(f"All {n_drops} drops failed; first error: {outcomes[0].error}")

        drop_status = pd.DataFrame([
            {"drop": o.drop, "seed": str(o.seed), "status": o.status, "error": o.error or ""} for o in outcomes
        ])
        summary = summarize(
            pd.concat(traces, ignore_index=True),
            n_actions=len(action_space),
            iterations=config.iterations,
            last_window_frac=config.last_window_frac,
            transitory_frac=config.transitory_frac,
            drop_status=drop_status,
        )
        export(summary, out_dir)
    except Exception:
        if run_id is not None:
            ledger.finish_run(session_maker, run_id, status="failed")
        raise

    if run_id is not None:
        ledger.finish_run(session_maker, run_id, summary)
    log.info(f"Finished {config.label}: {len(traces)}/{n_drops} drops completed")
    return summary
