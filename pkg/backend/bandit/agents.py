from abc import ABC, abstractmethod

import numpy as np

import constants
from bandit.policies import (
    EXPLOIT_LAST,
    EXPLOIT_MEAN,
    EpsSchedule,
    eps_at,
    select_egreedy,
    select_thompson,
    update_mean,
    update_ts,
)
from bandit.state import AgentState
from constants import ConfigurationError


class BanditAgent(ABC):
    """One AP's learner.

    `act` picks the arm for the current iteration; `observe` applies the
    reward for that arm, which arrives at the start of the next iteration.
    """

    def __init__(self, n_arms: int, rng: np.random.Generator):
        self.state = AgentState.fresh(n_arms)
        self.rng = rng

    def act(self) -> int:
        self.state.t += 1
        arm = self._select()
        self.state.mark_selected(arm)
        return arm

    def observe(self, reward: float) -> None:
        self._update(self.state.last_action, reward)

    @abstractmethod
    def _select(self) -> int:
        ...

    def _update(self, arm: int, reward: float) -> None:
        update_mean(self.state, arm, reward)


class EpsilonGreedyAgent(BanditAgent):
    """Decaying epsilon-greedy.

    The first `warmup_rounds` rounds play every arm once per round in a
    fresh random order, so no arm is judged on its zero-initialised
    estimate. The schedule keeps counting t from the first iteration.
    """

    def __init__(
        self,
        n_arms,
        rng,
        eps0: float = constants.EPS0,
        exploit_statistic: str = EXPLOIT_MEAN,
        warmup_rounds: int = constants.EPS_WARMUP_ROUNDS,
    ):
        super().__init__(n_arms, rng)
        if exploit_statistic not in (EXPLOIT_MEAN, EXPLOIT_LAST):
            raise ConfigurationError(f"Unknown exploit statistic: {exploit_statistic}")
        if warmup_rounds < 0:
            raise ConfigurationError(f"warmup_rounds must be non-negative, got {warmup_rounds}")
        self.schedule = EpsSchedule(eps0=eps0)
        self.exploit_statistic = exploit_statistic
        self.warmup_rounds = warmup_rounds
        self._round_order = None

    @property
    def warming_up(self) -> bool:
        return self.state.t <= self.warmup_rounds * self.state.n_arms

    def _select(self) -> int:
        if self.warming_up:
            slot = (self.state.t - 1) % self.state.n_arms
            if slot == 0:
                self._round_order = self.rng.permutation(self.state.n_arms)
            return int(self._round_order[slot])
        eps = eps_at(self.state.t, self.schedule)
        return select_egreedy(self.state, eps, self.rng, self.exploit_statistic)


class ThompsonSamplingAgent(BanditAgent):
    def __init__(self, n_arms, rng, literal_denominator: bool = False):
        super().__init__(n_arms, rng)
        self.literal_denominator = literal_denominator

    def _select(self) -> int:
        return select_thompson(self.state, self.rng)

    def _update(self, arm: int, reward: float) -> None:
        update_ts(self.state, arm, reward, self.literal_denominator)


class StaticAgent(BanditAgent):
    """Baseline that always plays the same arm but still books its rewards."""

    def __init__(self, n_arms, rng, arm: int):
        super().__init__(n_arms, rng)
        if not 0 <= arm < n_arms:
            raise ConfigurationError(f"Static arm {arm} outside the action space")
        self.arm = arm

    def _select(self) -> int:
        return self.arm
