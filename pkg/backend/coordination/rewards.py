"""Reward sharing between agents under perfect monitoring.

Every agent sees every other agent's reward at the end of each iteration, so
"distribution" is a synchronous in-process exchange.
"""
import logging
import math
from enum import Enum
from typing import List, Sequence

from pydantic import BaseModel, ConfigDict, Field

import constants
from constants import ConfigurationError
from environment.base import EnvStep

logger = logging.getLogger(__name__)


class RewardKind(str, Enum):
    SELF = "self"
    AVG = "avg"
    MAXMIN = "maxmin"
    PF = "pf"

    @property
    def shared(self) -> bool:
        return self is not RewardKind.SELF


class RewardStrategy(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: RewardKind = RewardKind.SELF
    pf_floor: float = Field(constants.PF_FLOOR, gt=0)


def self_reward(throughput_mbps: float, isolation_mbps: float) -> float:
    """Throughput normalised by the isolation throughput, clamped to [0, 1]."""
    if isolation_mbps <= 0:
        raise ConfigurationError(f"Isolation throughput must be positive, got {isolation_mbps}")
    return min(1.0, max(0.0, throughput_mbps / isolation_mbps))


def shared_reward(strategy: RewardStrategy, individual: Sequence[float]) -> float:
    if len(individual) == 0:
        raise ConfigurationError("cannot share an empty reward list")
    if strategy.kind is RewardKind.AVG:
        return math.fsum(individual) / len(individual)
    if strategy.kind is RewardKind.MAXMIN:
        return min(individual)
    if strategy.kind is RewardKind.PF:
        floored = [max(r, strategy.pf_floor) for r in individual]
        if any(r < strategy.pf_floor for r in individual):
            logger.debug(f"PF clamped rewards to floor {strategy.pf_floor}: {floored}")
        return math.fsum(math.log(r) for r in floored)
    raise ConfigurationError("SELF rewards are not shared")


def distribute(strategy: RewardStrategy, step: EnvStep) -> List[float]:
    """The reward each agent learns from this iteration."""
    individual = step.normalized
    if not strategy.kind.shared:
        return [float(r) for r in individual]
    value = shared_reward(strategy, individual)
    return [value] * len(individual)
