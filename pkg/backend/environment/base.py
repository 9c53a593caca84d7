from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from constants import ConfigurationError
from obss_sim.metrics import IterationMetrics


@dataclass(frozen=True)
class EnvStep:
    """Outcome of one iteration: normalised throughput per agent, plus raw metrics when simulated."""

    normalized: Tuple[float, ...]
    metrics: Optional[Tuple[IterationMetrics, ...]] = None


class Environment(ABC):
    """What the learning loop drives: one joint action in, one EnvStep out."""

    def __init__(self, n_agents: int, n_actions: int):
        self.n_agents = n_agents
        self.n_actions = n_actions

    def check_joint_action(self, joint_action: Sequence[int]) -> Tuple[int, ...]:
        if len(joint_action) != self.n_agents:
            raise ConfigurationError(f"Expected {self.n_agents} actions, got {len(joint_action)}")
        for agent, k in enumerate(joint_action):
            if not 0 <= k < self.n_actions:
                raise ConfigurationError(f"Agent {agent} played invalid action index {k}")
        return tuple(int(k) for k in joint_action)

    @abstractmethod
    def step(self, joint_action: Sequence[int], rng: np.random.Generator) -> EnvStep:
        ...


def env_step(env: Environment, joint_action: Sequence[int], rng: np.random.Generator) -> EnvStep:
    return env.step(joint_action, rng)
