import itertools
import logging
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

import constants
from constants import ConfigurationError
from coordination.rewards import self_reward
from environment.base import EnvStep, Environment
from environment.matrix_game import PayoffMatrix
from obss_sim.simulator import SlotSimulator
from radio.isolation import isolation_throughputs
from scenario.models import ActionSpace, Deployment

logger = logging.getLogger(__name__)


class ObssSimEnv(Environment):
    """Each BSS is an agent; a step is one slotted-simulator iteration of `duration_s`."""

    def __init__(self, deployment: Deployment, action_space: ActionSpace, duration_s: float = constants.DELTA_S):
        super().__init__(len(deployment.bsses), len(action_space))
        self.deployment = deployment
        self.action_space = action_space
        self.duration_s = duration_s
        self.isolation_mbps = isolation_throughputs(deployment, duration_s)
        self._simulators: Dict[Tuple[int, ...], SlotSimulator] = {}

    def simulator(self, profile: Tuple[int, ...]) -> SlotSimulator:
        sim = self._simulators.get(profile)
        if sim is None:
            sim = SlotSimulator(self.deployment, [self.action_space[k] for k in profile])
            self._simulators[profile] = sim
        return sim

    def step(self, joint_action: Sequence[int], rng: np.random.Generator) -> EnvStep:
        profile = self.check_joint_action(joint_action)
        metrics = self.simulator(profile).run(self.duration_s, rng).metrics
        normalized = tuple(self_reward(m.throughput_mbps, g) for m, g in zip(metrics, self.isolation_mbps))
        return EnvStep(normalized=normalized, metrics=tuple(metrics))


def derive_payoff_matrix(
    deployment: Deployment,
    action_space: ActionSpace,
    iterations: int = 10,
    seed: int = 0,
    duration_s: float = constants.DELTA_S,
    progress: Optional[Callable] = None,
) -> PayoffMatrix:
    """Tabulate mean normalised throughput of every joint action on the simulator."""
    n_agents, n_actions = len(deployment.bsses), len(action_space)
    if n_actions ** n_agents > constants.MAX_PAYOFF_PROFILES:
        raise ConfigurationError(
            f"{n_actions}^{n_agents} joint profiles exceed the limit of {constants.MAX_PAYOFF_PROFILES}"
        )
    if iterations < 1:
        raise ConfigurationError("at least one iteration per profile is required")

    env = ObssSimEnv(deployment, action_space, duration_s)
    rng = np.random.default_rng(seed)
    table = np.zeros((n_actions,) * n_agents + (n_agents,))
    variances = []
    for profile in itertools.product(range(n_actions), repeat=n_agents):
        samples = np.array([env.step(profile, rng).normalized for _ in range(iterations)])
        table[profile] = samples.mean(axis=0)
        if iterations > 1:
            variances.append(samples.var(axis=0, ddof=1).mean())
        if progress is not None:
            progress(profile)
    noise_std = float(np.sqrt(np.mean(variances))) if variances else 0.0
    logger.info(f"Derived {n_actions}^{n_agents} payoff matrix, pooled noise std {noise_std:.4f}")
    return PayoffMatrix(table=table, noise_std=noise_std)
