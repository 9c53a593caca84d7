from dataclasses import dataclass
from typing import Optional

import numpy as np

from constants import SimulationError


@dataclass
class AgentState:
    """Per-arm estimates and play counts of one agent."""

    estimates: np.ndarray
    counts: np.ndarray
    last_rewards: np.ndarray
    t: int = 0
    last_action: Optional[int] = None
    pending: bool = False

    @classmethod
    def fresh(cls, n_arms: int) -> "AgentState":
        if n_arms < 1:
            raise SimulationError("an agent needs at least one arm")
        return cls(
            estimates=np.zeros(n_arms),
            counts=np.zeros(n_arms, dtype=np.int64),
            last_rewards=np.zeros(n_arms),
        )

    @property
    def n_arms(self) -> int:
        return len(self.estimates)

    def mark_selected(self, arm: int) -> None:
        if self.pending:
            raise SimulationError(f"arm {self.last_action} still awaits its reward")
        self.last_action = arm
        self.pending = True

    def take_pending(self, arm: int) -> None:
        if not self.pending or self.last_action != arm:
            raise SimulationError(f"no pending reward for arm {arm}")
        self.pending = False
