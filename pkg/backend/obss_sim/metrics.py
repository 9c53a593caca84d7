from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class IterationMetrics:
    """What one BSS experienced during one learning iteration."""

    throughput_mbps: float
    airtime_frac: float
    mean_access_delay_ms: float
    nav_frac: float
    tx_attempts: int
    tx_failures: int

    @property
    def idle_frac(self) -> float:
        return 1.0 - self.airtime_frac - self.nav_frac


@dataclass
class BssRuntimeState:
    """MAC state of every BSS in a run, one array entry per BSS."""

    backoff_counter: np.ndarray
    cw_exponent: np.ndarray
    # slot index at which the current TXOP ends; <= now means not transmitting
    tx_end: np.ndarray
    airtime_slots: np.ndarray = field(init=False)
    nav_slots: np.ndarray = field(init=False)
    delivered_bits: np.ndarray = field(init=False)
    pending_bits: np.ndarray = field(init=False)
    pending_success: np.ndarray = field(init=False)
    attempts: np.ndarray = field(init=False)
    failures: np.ndarray = field(init=False)
    delay_slots: np.ndarray = field(init=False)
    accesses: np.ndarray = field(init=False)
    eligible_since: np.ndarray = field(init=False)
    next_sta: np.ndarray = field(init=False)

    def __post_init__(self):
        n = len(self.backoff_counter)
        for name in ("airtime_slots", "nav_slots", "delivered_bits", "pending_bits", "attempts",
                     "failures", "delay_slots", "accesses", "eligible_since", "next_sta"):
            setattr(self, name, np.zeros(n, dtype=np.int64))
        self.pending_success = np.zeros(n, dtype=bool)

    @classmethod
    def fresh(cls, n: int, cwe_min: int) -> "BssRuntimeState":
        return cls(
            backoff_counter=np.zeros(n, dtype=np.int64),
            cw_exponent=np.full(n, cwe_min, dtype=np.int64),
            tx_end=np.zeros(n, dtype=np.int64),
        )
