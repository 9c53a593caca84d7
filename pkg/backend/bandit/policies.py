"""Action selection and estimate updates.

Selections and updates act on an AgentState in place; updates also return
it so calls can be chained in tests.
"""
import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

import constants
from bandit.state import AgentState
from constants import ConfigurationError, SimulationError

EXPLOIT_MEAN = "mean"
EXPLOIT_LAST = "last"


class EpsSchedule(BaseModel):
    model_config = ConfigDict(frozen=True)

    eps0: float = Field(constants.EPS0, ge=0.0, le=1.0)


def eps_at(t: int, sched: EpsSchedule = EpsSchedule()) -> float:
    if t < 1:
        raise ConfigurationError(f"iterations are counted from 1, got {t}")
    return min(1.0, sched.eps0 / math.sqrt(t))


def _argmax_random_tie(values: np.ndarray, rng: np.random.Generator) -> int:
    best = np.flatnonzero(values == values.max())
    if best.size == 1:
        return int(best[0])
    return int(rng.choice(best))


def select_egreedy(state: AgentState, eps: float, rng: np.random.Generator, statistic: str = EXPLOIT_MEAN) -> int:
    if rng.random() < eps:
        return int(rng.integers(state.n_arms))
    values = state.last_rewards if statistic == EXPLOIT_LAST else state.estimates
    return _argmax_random_tie(values, rng)


def thompson_params(state: AgentState) -> Tuple[np.ndarray, np.ndarray]:
    """Mean and variance of each arm's Gaussian reward model."""
    return state.estimates.copy(), 1.0 / (state.counts + 1.0)


def select_thompson(state: AgentState, rng: np.random.Generator) -> int:
    mean, var = thompson_params(state)
    theta = rng.normal(mean, np.sqrt(var))
    return _argmax_random_tie(theta, rng)


def update_mean(state: AgentState, k: int, reward: float) -> AgentState:
    state.take_pending(k)
    n = state.counts[k]
    state.estimates[k] = (state.estimates[k] * n + reward) / (n + 1)
    state.counts[k] = n + 1
    state.last_rewards[k] = reward
    return state


def update_ts(state: AgentState, k: int, reward: float, literal_denominator: bool = False) -> AgentState:
    """Gaussian-model estimate update.

    The default shrinks towards the zero prior with an N+2 denominator. The
    literal form divides by reward+2 instead and is kept for comparison runs.
    """
    state.take_pending(k)
    n = state.counts[k]
    denominator = reward + 2.0 if literal_denominator else n + 2.0
    if denominator == 0:
        raise SimulationError(f"reward {reward} makes the literal update undefined")
    state.estimates[k] = (state.estimates[k] * n + reward) / denominator
    state.counts[k] = n + 1
    state.last_rewards[k] = reward
    return state
