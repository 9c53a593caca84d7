import logging
from pathlib import Path
from typing import Iterable, List, Optional

import pandas as pd

import constants
from coordination.rewards import RewardKind
from harness.config import STATIC_STRATEGIES, ExperimentConfig
from harness.export import FLOAT_FORMAT
from harness.runner import run_experiment
from harness.summary import WINDOW_LAST, RunSummary

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ("label", "strategy", "reward", "out_dir", "metric", "mean", "min", "max")


def sweep_configs(base: ExperimentConfig, strategies: Iterable[str], rewards: Iterable[RewardKind]) -> List[ExperimentConfig]:
    """One configuration per (strategy, reward); static baselines ignore the reward and run once."""
    root = Path(base.out_dir)
    configs, seen = [], set()
    for strategy in strategies:
        for reward in rewards:
            if strategy in STATIC_STRATEGIES:
                reward = RewardKind.SELF
            candidate = base.model_copy(update={"strategy": strategy, "reward": reward})
            if candidate.label in seen:
                continue
            seen.add(candidate.label)
            configs.append(base.model_copy(update={
                "strategy": strategy,
                "reward": reward,
                "out_dir": str(root / candidate.label),
            }))
    return configs


def _rows(config: ExperimentConfig, summary: RunSummary) -> pd.DataFrame:
    last = summary.summary[summary.summary["window"] == WINDOW_LAST].drop(columns="window")
    last.insert(0, "out_dir", config.out_dir)
    last.insert(0, "reward", config.reward.value)
    last.insert(0, "strategy", config.strategy)
    last.insert(0, "label", config.label)
    return last


def run_sweep(
    base: ExperimentConfig,
    strategies: Iterable[str],
    rewards: Iterable[RewardKind],
    workers: Optional[int] = None,
    session_maker=None,
) -> pd.DataFrame:
    """Run every configuration of the sweep and write the last-window comparison table."""
    configs = sweep_configs(base, list(strategies), list(rewards))
    logger.info(f"Sweep over {len(configs)} configurations into {base.out_dir}")
    tables = []
    for config in configs:
        summary = run_experiment(config, workers=workers, session_maker=session_maker)
        tables.append(_rows(config, summary))
    table = pd.concat(tables, ignore_index=True)[list(SWEEP_COLUMNS)]
    out = Path(base.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    table.to_csv(out / constants.SWEEP_FILE, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return table
