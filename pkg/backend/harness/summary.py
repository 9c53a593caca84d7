import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

import constants
from constants import InputValidationError
from scenario.models import ActionSpace

METRICS = ("reward", "throughput_mbps", "airtime_frac", "delay_ms", "nav_frac")
CDF_METRICS = {"throughput": "throughput_mbps", "delay": "delay_ms", "reward": "reward"}
WINDOW_ALL = "all"
WINDOW_FIRST = "first"
WINDOW_LAST = "last"


@dataclass
class RunSummary:
    trace: pd.DataFrame
    summary: pd.DataFrame
    actions: pd.DataFrame
    drops: pd.DataFrame
    timeline: pd.DataFrame
    cdfs: Dict[str, pd.DataFrame] = field(default_factory=dict)

    def modal_action(self, agent: int, column: str = "full_run") -> int:
        rows = self.actions[self.actions["agent"] == agent]
        return int(rows.loc[rows[column].idxmax(), "action"])

    def frequency(self, agent: int, action: int, column: str = "full_run") -> float:
        rows = self.actions[(self.actions["agent"] == agent) & (self.actions["action"] == action)]
        return float(rows[column].iloc[0])


def jain_index(values: Sequence[float]) -> float:
    x = np.asarray(values, dtype=float)
    denom = len(x) * float(np.sum(x ** 2))
    if denom == 0:
        return 1.0
    return float(np.sum(x) ** 2 / denom)


def empirical_cdf(values: Sequence[float]) -> pd.DataFrame:
    """n points (value, p) with p running from 1/n to 1."""
    v = np.sort(np.asarray(values, dtype=float))
    n = len(v)
    return pd.DataFrame({"value": v, "p": np.arange(1, n + 1) / n})


def window_bounds(iterations: int, last_window_frac: float, transitory_frac: float) -> Dict[str, tuple]:
    """Inclusive 1-based iteration ranges for each reporting window."""
    last_n = max(1, int(math.ceil(iterations * last_window_frac - 1e-9)))
    first_n = max(1, int(math.ceil(iterations * transitory_frac - 1e-9)))
    return {
        WINDOW_ALL: (1, iterations),
        WINDOW_FIRST: (1, min(first_n, iterations)),
        WINDOW_LAST: (iterations - min(last_n, iterations) + 1, iterations),
    }


def _window(trace: pd.DataFrame, bounds: tuple) -> pd.DataFrame:
    lo, hi = bounds
    return trace[(trace["iter"] >= lo) & (trace["iter"] <= hi)]


def _available(trace: pd.DataFrame) -> List[str]:
    return [m for m in METRICS if m in trace and trace[m].notna().any()]


def _metric_table(trace: pd.DataFrame, windows: Dict[str, tuple], fairness_metric: str) -> pd.DataFrame:
    metrics = _available(trace)
    rows = []
    for name, bounds in windows.items():
        # per-BSS means over iterations, then spread across BSSs, then mean over drops
        per_bss = _window(trace, bounds).groupby(["drop", "agent"])[metrics].mean()
        per_drop = per_bss.groupby(level="drop").agg(["mean", "min", "max"])
        across = per_drop.mean()
        for metric in metrics:
            rows.append({
                "window": name,
                "metric": metric,
                "mean": across[(metric, "mean")],
                "min": across[(metric, "min")],
                "max": across[(metric, "max")],
            })
        jain = per_bss[fairness_metric].groupby(level="drop").apply(jain_index)
        rows.append({
            "window": name, "metric": "jain_fairness",
            "mean": jain.mean(), "min": jain.min(), "max": jain.max(),
        })
    return pd.DataFrame(rows, columns=["window", "metric", "mean", "min", "max"])


def _action_table(trace: pd.DataFrame, n_actions: int, windows: Dict[str, tuple]) -> pd.DataFrame:
    agents = sorted(trace["agent"].unique())
    table = pd.DataFrame(
        [(a, k, ActionSpace.name(k)) for a in agents for k in range(n_actions)],
        columns=["agent", "action", "label"],
    )
    for name, column in ((WINDOW_ALL, "full_run"), (WINDOW_FIRST, "first_window"), (WINDOW_LAST, "last_window")):
        counts = _window(trace, windows[name]).groupby(["agent", "action"]).size()
        freq = (counts / counts.groupby(level="agent").transform("sum")).rename(column)
        table = table.merge(freq.reset_index(), on=["agent", "action"], how="left")
        table[column] = table[column].fillna(0.0)
    return table


def _drop_table(trace: pd.DataFrame, fairness_metric: str, drop_status: Optional[pd.DataFrame]) -> pd.DataFrame:
    per_bss = trace.groupby(["drop", "agent"])[_available(trace)].mean()
    grouped = per_bss.groupby(level="drop")
    drops = pd.DataFrame({
        "mean_throughput_mbps": grouped[fairness_metric].mean() if fairness_metric == "throughput_mbps" else np.nan,
        "min_throughput_mbps": grouped[fairness_metric].min() if fairness_metric == "throughput_mbps" else np.nan,
        "max_throughput_mbps": grouped[fairness_metric].max() if fairness_metric == "throughput_mbps" else np.nan,
        "max_delay_ms": grouped["delay_ms"].max() if "delay_ms" in per_bss else np.nan,
        "mean_reward": grouped["reward"].mean(),
        "jain_fairness": grouped[fairness_metric].apply(jain_index),
        "modal_action": trace.groupby("drop")["action"].agg(lambda s: int(s.value_counts().sort_index().idxmax())),
    })
    drops.index.name = "drop"
    drops = drops.reset_index()
    drops["status"] = "ok"
    drops["error"] = ""
    if drop_status is not None:
        failed = drop_status[drop_status["status"] != "ok"]
        drops = pd.concat([drops, failed[["drop", "status", "error"]]], ignore_index=True)
        drops = drops.merge(drop_status[["drop", "seed"]], on="drop", how="left")
    return drops.sort_values("drop").reset_index(drop=True)


def _timeline(trace: pd.DataFrame) -> pd.DataFrame:
    per_iter = trace.groupby(["drop", "iter"]).agg(
        mean_reward=("reward", "mean"),
        mean_throughput_mbps=("throughput_mbps", "mean"),
        min_throughput_mbps=("throughput_mbps", "min"),
    )
    return per_iter.groupby(level="iter").mean().reset_index()


def summarize(
    trace: pd.DataFrame,
    n_actions: int,
    iterations: int,
    last_window_frac: float = constants.LAST_WINDOW_FRAC,
    transitory_frac: float = constants.TRANSITORY_FRAC,
    drop_status: Optional[pd.DataFrame] = None,
) -> RunSummary:
    """Aggregate a run's trace into the reported tables."""
    if trace.empty:
        raise InputValidationError("cannot summarize an empty trace")
    windows = window_bounds(iterations, last_window_frac, transitory_frac)
    fairness_metric = "throughput_mbps" if "throughput_mbps" in _available(trace) else "reward"

    per_bss_all = trace.groupby(["drop", "agent"])[_available(trace)].mean()
    cdfs = {
        name: empirical_cdf(per_bss_all[column].to_numpy())
        for name, column in CDF_METRICS.items()
        if column in per_bss_all
    }
    return RunSummary(
        trace=trace,
        summary=_metric_table(trace, windows, fairness_metric),
        actions=_action_table(trace, n_actions, windows),
        drops=_drop_table(trace, fairness_metric, drop_status),
        timeline=_timeline(trace),
        cdfs=cdfs,
    )
