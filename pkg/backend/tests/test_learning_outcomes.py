import numpy as np
import orjson
import pandas as pd
import pytest

from conftest import GRID_SCENARIO
from harness.config import parse_experiment
from harness.runner import run_drop
from radio.propagation import rx_power_dbm
from scenario.models import RadioParams

A1, A4 = 0, 3
SEEDS = range(20)


def _toy_traces(experiment_data, strategy, reward):
    config = parse_experiment({
        **experiment_data, "strategy": strategy, "reward": reward, "sim_time_s": 300, "delta_s": 0.5,
    })
    return [run_drop(config, d) for d in SEEDS]


def _play_shares(trace):
    """(agent, action) -> share of the run's iterations."""
    counts = trace.groupby(["agent", "action"]).size()
    return (counts / counts.groupby(level="agent").transform("sum")).unstack(fill_value=0.0)


def _settled_on(traces, action, min_share=0.0):
    """Runs in which every agent's modal action is `action`, played at least `min_share` of the time."""
    settled = 0
    for trace in traces:
        shares = _play_shares(trace)
        modal = shares.idxmax(axis=1)
        if (modal == action).all() and (shares[action] >= min_share).all():
            settled += 1
    return settled


def _pooled_shares(traces):
    pooled = pd.concat(traces)
    return pooled["action"].value_counts(normalize=True).reindex(range(4), fill_value=0.0)


# toy matrix game

def test_selfish_agents_settle_on_the_conservative_action(experiment_data):
    traces = _toy_traces(experiment_data, "egreedy", "self")
    assert _settled_on(traces, A4, 0.5) >= 16


@pytest.mark.parametrize("reward", ["avg", "pf"])
def test_shared_reward_reaches_the_cooperative_action(experiment_data, reward):
    traces = _toy_traces(experiment_data, "egreedy", reward)
    assert _settled_on(traces, A1, 0.7) >= 16


def test_maxmin_settles_on_the_fair_action(experiment_data):
    traces = _toy_traces(experiment_data, "egreedy", "maxmin")
    assert _settled_on(traces, A4) >= 16


def test_thompson_explores_more_than_egreedy(experiment_data):
    greedy = _pooled_shares(_toy_traces(experiment_data, "egreedy", "avg"))
    thompson = _pooled_shares(_toy_traces(experiment_data, "thompson", "avg"))
    assert thompson.idxmax() == A1
    assert thompson[A1] < greedy[A1]


def test_thompson_pf_prefers_the_cooperative_action(experiment_data):
    assert _pooled_shares(_toy_traces(experiment_data, "thompson", "pf")).idxmax() == A1


def test_avg_example_run(experiment_data):
    config = parse_experiment({**experiment_data, "sim_time_s": 300, "delta_s": 0.5})
    shares = _play_shares(run_drop(config, 0))
    assert (shares.idxmax(axis=1) == A1).all()
    assert (shares[A1] > 0.80).all()


# co-channel chain: the middle AP hears both ends, the ends only hear each other below -72 dBm

CHAIN_SPACING_M = 10.0


@pytest.fixture
def chain_scenario(tmp_path):
    path = tmp_path / "chain.json"
    path.write_bytes(orjson.dumps({
        "name": "chain",
        "channels": [1],
        "bsses": [
            {"id": i, "ap_pos": [x, 0.0], "sta_pos": [sta], "channel": 1}
            for i, (x, sta) in enumerate([
                (0.0, [-1.0, 0.0]),
                (CHAIN_SPACING_M, [CHAIN_SPACING_M, 1.0]),
                (2 * CHAIN_SPACING_M, [2 * CHAIN_SPACING_M + 1.0, 0.0]),
            ])
        ],
        "actions": {"pd_dbm": [-72, -82], "tx_power_dbm": [10, 20]},
    }))
    return path


def _chain_config(experiment_data, chain_scenario, **overrides):
    return parse_experiment({
        **experiment_data,
        "scenario": str(chain_scenario),
        "environment": "obss",
        "payoff": None,
        "sim_time_s": 150,
        "delta_s": 0.5,
        **overrides,
    })


def _last_window_min(trace, config):
    last = trace[trace["iter"] > config.iterations * (1 - config.last_window_frac)]
    return last.groupby("agent")["throughput_mbps"].mean().min()


def test_chain_geometry():
    radio = RadioParams()
    neighbour = rx_power_dbm(10, CHAIN_SPACING_M, radio)
    ends_loud = rx_power_dbm(20, 2 * CHAIN_SPACING_M, radio)
    ends_quiet = rx_power_dbm(10, 2 * CHAIN_SPACING_M, radio)
    assert neighbour > -72
    assert -82 <= ends_loud < -72
    assert ends_quiet < -82


def test_raising_pd_frees_the_chain_ends(experiment_data, chain_scenario):
    dcf = run_drop(_chain_config(experiment_data, chain_scenario, strategy="static-dcf", sim_time_s=5), 0)
    obsspd = run_drop(_chain_config(experiment_data, chain_scenario, strategy="static-obsspd", sim_time_s=5), 0)
    for end in (0, 2):
        assert obsspd[obsspd["agent"] == end]["nav_frac"].mean() < dcf[dcf["agent"] == end]["nav_frac"].mean()


def test_static_obsspd_squeezes_the_middle_of_the_chain(experiment_data, chain_scenario):
    config = _chain_config(experiment_data, chain_scenario, strategy="static-obsspd", sim_time_s=20)
    per_bss = run_drop(config, 0).groupby("agent")["throughput_mbps"].mean()
    assert per_bss.idxmin() == 1


def test_maxmin_lifts_the_chain_minimum(experiment_data, chain_scenario):
    static = _chain_config(experiment_data, chain_scenario, strategy="static-obsspd")
    maxmin = _chain_config(experiment_data, chain_scenario, strategy="egreedy", reward="maxmin")
    assert _last_window_min(run_drop(maxmin, 0), maxmin) > _last_window_min(run_drop(static, 0), static)


def test_maxmin_ends_learn_to_hear_each_other(experiment_data, chain_scenario):
    config = _chain_config(experiment_data, chain_scenario, strategy="egreedy", reward="maxmin")
    trace = run_drop(config, 0)
    last = trace[trace["iter"] > config.iterations * (1 - config.last_window_frac)]
    modal = last.groupby("agent")["action"].agg(lambda s: s.value_counts().idxmax())
    assert modal[0] == modal[2] == A4


# 9-BSS grid

def _grid_config(experiment_data, **overrides):
    return parse_experiment({
        **experiment_data,
        "scenario": str(GRID_SCENARIO),
        "environment": "obss",
        "payoff": None,
        "sim_time_s": 150,
        "delta_s": 0.5,
        **overrides,
    })


def _grid_outcomes(config):
    """Per-drop (mean, min) across BSSs of last-window throughput."""
    rows = []
    for d in SEEDS:
        trace = run_drop(config, d)
        last = trace[trace["iter"] > config.iterations * (1 - config.last_window_frac)]
        per_bss = last.groupby("agent")["throughput_mbps"].mean()
        rows.append((per_bss.mean(), per_bss.min()))
    return np.array(rows)


@pytest.mark.slow
def test_grid_maxmin_raises_the_minimum_over_obsspd(experiment_data):
    static = _grid_outcomes(_grid_config(experiment_data, strategy="static-obsspd"))
    maxmin = _grid_outcomes(_grid_config(experiment_data, strategy="egreedy", reward="maxmin"))
    assert np.mean(maxmin[:, 1] > static[:, 1]) >= 0.5


@pytest.mark.slow
def test_grid_avg_keeps_mean_throughput(experiment_data):
    static = _grid_outcomes(_grid_config(experiment_data, strategy="static-obsspd"))
    avg = _grid_outcomes(_grid_config(experiment_data, strategy="egreedy", reward="avg"))
    assert np.mean(avg[:, 0] >= static[:, 0]) >= 0.6
