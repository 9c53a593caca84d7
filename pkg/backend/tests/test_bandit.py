import math

import numpy as np
import pytest

from bandit.agents import EpsilonGreedyAgent, StaticAgent, ThompsonSamplingAgent
from bandit.policies import (
    EXPLOIT_LAST,
    EpsSchedule,
    eps_at,
    select_egreedy,
    select_thompson,
    thompson_params,
    update_mean,
    update_ts,
)
from bandit.state import AgentState
from constants import ConfigurationError, SimulationError


def _played(state, arm, reward, update=update_mean, **kwargs):
    state.mark_selected(arm)
    return update(state, arm, reward, **kwargs)


def test_eps_schedule():
    sched = EpsSchedule(eps0=0.1)
    for t in (1, 2, 10, 1000):
        assert eps_at(t, sched) == pytest.approx(0.1 / math.sqrt(t), abs=1e-12)
    assert eps_at(1, EpsSchedule(eps0=1.0)) == 1.0
    with pytest.raises(ConfigurationError):
        eps_at(0, sched)


def test_egreedy_exploits_best_estimate():
    state = AgentState.fresh(4)
    state.estimates[:] = [0.1, 0.7, 0.3, 0.2]
    rng = np.random.default_rng(0)
    assert all(select_egreedy(state, 0.0, rng) == 1 for _ in range(50))


def test_egreedy_last_reward_statistic():
    state = AgentState.fresh(3)
    state.estimates[:] = [0.9, 0.1, 0.1]
    state.last_rewards[:] = [0.0, 0.0, 0.5]
    assert select_egreedy(state, 0.0, np.random.default_rng(0), EXPLOIT_LAST) == 2


def test_egreedy_exploration_rate():
    state = AgentState.fresh(4)
    state.estimates[:] = [1.0, 0.0, 0.0, 0.0]
    rng = np.random.default_rng(1)
    n = 20000
    picks = np.array([select_egreedy(state, 0.2, rng) for _ in range(n)])
    # non-greedy arms are picked with probability eps * 3/4
    p = 0.2 * 0.75
    assert abs(np.mean(picks != 0) - p) < 3 * math.sqrt(p * (1 - p) / n)


def test_egreedy_full_exploration_is_uniform():
    state = AgentState.fresh(4)
    state.estimates[:] = [1.0, 0.0, 0.0, 0.0]
    rng = np.random.default_rng(11)
    n = 20000
    counts = np.bincount([select_egreedy(state, 1.0, rng) for _ in range(n)], minlength=4)
    sigma = math.sqrt(n * 0.25 * 0.75)
    assert np.all(np.abs(counts - n / 4) < 3 * sigma)


def test_egreedy_ties_are_broken_uniformly():
    state = AgentState.fresh(2)
    rng = np.random.default_rng(2)
    picks = [select_egreedy(state, 0.0, rng) for _ in range(4000)]
    assert 0.45 < np.mean(picks) < 0.55


def test_thompson_params():
    state = AgentState.fresh(2)
    _played(state, 0, 0.6)
    _played(state, 0, 0.4)
    mean, var = thompson_params(state)
    np.testing.assert_allclose(mean, [0.5, 0.0])
    np.testing.assert_allclose(var, [1 / 3, 1.0])


def test_thompson_prefers_well_estimated_winner():
    state = AgentState.fresh(2)
    state.estimates[:] = [0.9, 0.1]
    state.counts[:] = [10_000, 10_000]
    rng = np.random.default_rng(3)
    assert sum(select_thompson(state, rng) == 0 for _ in range(500)) > 495


def test_thompson_still_tries_an_unplayed_arm():
    state = AgentState.fresh(2)
    state.estimates[:] = [0.0, 0.5]
    state.counts[:] = [0, 10**6]
    rng = np.random.default_rng(12)
    share = np.mean([select_thompson(state, rng) == 0 for _ in range(4000)])
    # N(0, 1) against a point mass at 0.5
    assert share >= 0.05


def test_thompson_follows_a_settled_large_gap():
    state = AgentState.fresh(2)
    state.estimates[:] = [10.0, 0.0]
    state.counts[:] = [10**6, 10**6]
    rng = np.random.default_rng(13)
    share = np.mean([select_thompson(state, rng) == 0 for _ in range(10000)])
    assert share > 0.999


def test_thompson_sample_spread_matches_variance():
    state = AgentState.fresh(1)
    state.counts[:] = [3]
    rng = np.random.default_rng(4)
    _, var = thompson_params(state)
    draws = rng.normal(state.estimates, np.sqrt(var), size=(20000, 1))
    assert np.var(draws) == pytest.approx(0.25, rel=0.05)


def test_update_mean_examples():
    state = AgentState.fresh(4)
    _played(state, 2, 0.6)
    assert state.estimates[2] == pytest.approx(0.6)
    assert state.counts.tolist() == [0, 0, 1, 0]


def test_update_mean_matches_running_average():
    rng = np.random.default_rng(5)
    state = AgentState.fresh(1)
    rewards = rng.random(500)
    for r in rewards:
        _played(state, 0, r)
    assert state.estimates[0] == pytest.approx(np.mean(rewards), abs=1e-12)
    assert state.last_rewards[0] == rewards[-1]


def test_update_ts_recurrence():
    state = AgentState.fresh(1)
    _played(state, 0, 1.0, update_ts)
    assert state.estimates[0] == pytest.approx(0.5)
    _played(state, 0, 1.0, update_ts)
    # (0.5 * 1 + 1) / 3
    assert state.estimates[0] == pytest.approx(0.5)


def test_update_ts_literal_denominator():
    state = AgentState.fresh(1)
    _played(state, 0, 0.0, update_ts, literal_denominator=True)
    assert state.estimates[0] == 0.0
    _played(state, 0, 1.0, update_ts, literal_denominator=True)
    assert state.estimates[0] == pytest.approx(1.0 / 3.0)
    with pytest.raises(SimulationError):
        _played(state, 0, -2.0, update_ts, literal_denominator=True)


def test_reward_requires_pending_selection():
    state = AgentState.fresh(2)
    with pytest.raises(SimulationError):
        update_mean(state, 0, 1.0)
    state.mark_selected(1)
    with pytest.raises(SimulationError):
        update_mean(state, 0, 1.0)
    with pytest.raises(SimulationError):
        state.mark_selected(0)


def test_agent_act_observe_cycle():
    agent = EpsilonGreedyAgent(4, np.random.default_rng(6))
    for _ in range(30):
        arm = agent.act()
        agent.observe(0.5)
        assert agent.state.last_action == arm
    assert agent.state.t == 30
    assert agent.state.counts.sum() == 30


def test_egreedy_warmup_plays_each_arm_once_per_round():
    agent = EpsilonGreedyAgent(4, np.random.default_rng(9), eps0=0.0, warmup_rounds=3)
    rounds = []
    for _ in range(3):
        played = []
        for _ in range(4):
            played.append(agent.act())
            agent.observe(0.1 * played[-1])
        rounds.append(played)
    assert all(sorted(r) == [0, 1, 2, 3] for r in rounds)
    assert agent.state.counts.tolist() == [3, 3, 3, 3]
    # greedy from here on
    assert agent.act() == 3


def test_egreedy_without_warmup_starts_greedy():
    agent = EpsilonGreedyAgent(3, np.random.default_rng(10), eps0=0.0, warmup_rounds=0)
    assert agent.act() in (0, 1, 2)
    assert not agent.warming_up
    with pytest.raises(ConfigurationError):
        EpsilonGreedyAgent(3, np.random.default_rng(10), warmup_rounds=-1)


BERNOULLI_MEANS = [0.2, 0.4, 0.6, 0.8]


def _best_arm_share(agent, rng, iterations=10_000, tail=1_000):
    plays = np.empty(iterations, dtype=int)
    for i in range(iterations):
        arm = agent.act()
        agent.observe(float(rng.random() < BERNOULLI_MEANS[arm]))
        plays[i] = arm
    return np.mean(plays[-tail:] == len(BERNOULLI_MEANS) - 1)


@pytest.mark.parametrize("agent_cls", [EpsilonGreedyAgent, ThompsonSamplingAgent])
def test_agents_settle_on_the_best_bernoulli_arm(agent_cls):
    shares = []
    for seed in range(20):
        agent = agent_cls(len(BERNOULLI_MEANS), np.random.default_rng(1000 + seed))
        shares.append(_best_arm_share(agent, np.random.default_rng(seed)))
    assert sum(s >= 0.85 for s in shares) >= 18


def test_static_agent_never_moves():
    agent = StaticAgent(4, np.random.default_rng(0), arm=3)
    for _ in range(10):
        assert agent.act() == 3
        agent.observe(0.1)
    with pytest.raises(ConfigurationError):
        StaticAgent(4, np.random.default_rng(0), arm=4)
