"""Slotted CSMA/CA with OBSS/PD carrier sensing.

The slot loop is advanced event to event: between a TXOP start or end and
the next backoff expiry nothing changes state, so whole runs of identical
slots are accounted for at once. Results are slot-exact.
"""
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from constants import ConfigurationError
from obss_sim.metrics import BssRuntimeState, IterationMetrics
from radio.mcs import DEFAULT_MCS_TABLE, MCS_COUNT, McsTable, phy_rate_mbps, select_mcs
from radio.propagation import distances_m, rx_power_dbm, sinr_db
from scenario.models import Action, Deployment, MacParams, RadioParams


def frame_airtime(mcs: int, mac: MacParams, radio: RadioParams, table: Optional[McsTable] = None) -> float:
    """Airtime of one data frame in microseconds."""
    rate = phy_rate_mbps(mcs, radio, table or DEFAULT_MCS_TABLE)
    return mac.data_len_bytes * 8 / rate


@dataclass(frozen=True)
class TxopRecord:
    bss: int
    start_slot: int
    end_slot: int
    mcs: Optional[int]
    sinr_db: float
    success: bool


@dataclass(frozen=True)
class SimulationResult:
    metrics: List[IterationMetrics]
    n_slots: int
    txops: List[TxopRecord]


class SlotSimulator:
    """Link budgets for one deployment under one joint (power, PD) configuration."""

    def __init__(self, deployment: Deployment, joint_action: Sequence[Action]):
        bsses = deployment.ordered()
        if len(joint_action) != len(bsses):
            raise ConfigurationError(f"Expected {len(bsses)} actions, got {len(joint_action)}")

        self.deployment = deployment
        self.radio = deployment.radio
        self.mac = deployment.mac
        self.table = deployment.mcs
        self.n = len(bsses)

        power = np.array([a.tx_power_dbm for a in joint_action], dtype=float)
        pd = np.array([a.pd_dbm for a in joint_action], dtype=float)
        channel = np.array([b.channel for b in bsses])
        aps = np.array([b.ap_pos for b in bsses], dtype=float)

        cochannel = (channel[:, None] == channel[None, :]) & ~np.eye(self.n, dtype=bool)
        # rssi_ap[j, i]: power of AP j's frames at AP i
        self.rssi_ap = rx_power_dbm(power[:, None], distances_m(aps, aps), self.radio)
        # senses[j, i]: AP i defers while AP j transmits
        self.senses = cochannel & (self.rssi_ap >= pd[None, :])

        self.signal = []
        self.interference = []
        for i, bss in enumerate(bsses):
            stas = np.array(bss.sta_pos, dtype=float)
            self.signal.append(rx_power_dbm(power[i], distances_m(stas, aps[i:i + 1])[:, 0], self.radio))
            interf = rx_power_dbm(power[None, :], distances_m(stas, aps), self.radio)
            interf[:, ~cochannel[:, i]] = -np.inf
            self.interference.append(interf)

        self._txop_plan()

    def _txop_plan(self):
        mac = self.mac
        self.txop_slots = np.zeros(MCS_COUNT, dtype=np.int64)
        self.txop_bits = np.zeros(MCS_COUNT, dtype=np.int64)
        for m in range(MCS_COUNT):
            airtime = frame_airtime(m, mac, self.radio, self.table)
            if airtime > 0:
                fit = math.floor((mac.txop_limit_us - mac.overhead_us_per_txop) / airtime)
                n_agg = max(1, min(mac.ampdu_max, fit))
            else:
                n_agg = mac.ampdu_max
            duration_us = min(mac.txop_limit_us, mac.overhead_us_per_txop + n_agg * airtime)
            self.txop_slots[m] = max(1, math.ceil(duration_us / mac.slot_us - 1e-9))
            self.txop_bits[m] = n_agg * mac.data_len_bytes * 8

    def _draw_backoff(self, i: int, state: BssRuntimeState, streams) -> None:
        cw = self.mac.cw0 * 2 ** int(state.cw_exponent[i])
        state.backoff_counter[i] = streams[i].integers(0, cw)

    def _start_txop(self, i: int, now: int, transmitting: np.ndarray, state: BssRuntimeState, log) -> None:
        n_sta = len(self.signal[i])
        sta = int(state.next_sta[i]) % n_sta
        state.next_sta[i] += 1

        others = transmitting.copy()
        others[i] = False
        sinr = sinr_db(self.signal[i][sta], self.interference[i][sta, others], self.radio.noise_dbm)
        mcs = select_mcs(sinr, self.table)
        success = mcs is not None and sinr >= self.radio.capture_threshold_db
        # an undecodable link still occupies the medium for an MCS 0 TXOP
        used = 0 if mcs is None else mcs

        state.tx_end[i] = now + self.txop_slots[used]
        state.pending_bits[i] = self.txop_bits[used] if success else 0
        state.pending_success[i] = success
        state.attempts[i] += 1
        state.failures[i] += 0 if success else 1
        state.delay_slots[i] += now - state.eligible_since[i]
        state.accesses[i] += 1
        if log is not None:
            log.append(TxopRecord(i, now, int(state.tx_end[i]), mcs, float(sinr), success))

    def _end_txop(self, i: int, now: int, state: BssRuntimeState, streams) -> None:
        # TXOPs still running at the iteration boundary never get here
        state.delivered_bits[i] += state.pending_bits[i]
        if state.pending_success[i]:
            state.cw_exponent[i] = self.mac.cwe_min
        else:
            state.cw_exponent[i] = min(int(state.cw_exponent[i]) + 1, self.mac.cwe_max)
        state.eligible_since[i] = now
        self._draw_backoff(i, state, streams)

    def run(self, duration_s: float, rng: np.random.Generator, record: bool = False) -> SimulationResult:
        if duration_s <= 0:
            raise ConfigurationError(f"Iteration duration must be positive, got {duration_s}")
        n_slots = int(math.floor(duration_s * 1e6 / self.mac.slot_us + 1e-9))
        if n_slots < 1:
            raise ConfigurationError(f"Iteration of {duration_s} s is shorter than one slot")

        # one stream per BSS so a BSS's draws do not depend on its neighbours
        streams = rng.spawn(self.n)
        state = BssRuntimeState.fresh(self.n, self.mac.cwe_min)
        for i in range(self.n):
            self._draw_backoff(i, state, streams)
        log = [] if record else None

        now = 0
        while now < n_slots:
            active = state.tx_end > now
            busy = (self.senses & active[:, None]).any(axis=0)
            starters = np.flatnonzero(~active & ~busy & (state.backoff_counter == 0))
            if starters.size:
                # simultaneous expiries all transmit; the SINR sorts out who survives
                transmitting = active.copy()
                transmitting[starters] = True
                for i in starters:
                    self._start_txop(int(i), now, transmitting, state, log)
                continue

            counting = ~active & ~busy
            step = n_slots - now
            if active.any():
                step = min(step, int(state.tx_end[active].min()) - now)
            if counting.any():
                step = min(step, int(state.backoff_counter[counting].min()))

            state.airtime_slots[active] += step
            state.nav_slots[~active & busy] += step
            state.backoff_counter[counting] -= step
            now += step

            for i in np.flatnonzero(active & (state.tx_end == now)):
                self._end_txop(int(i), now, state, streams)

        return SimulationResult(self._collect(state, n_slots, duration_s), n_slots, log or [])

    def _collect(self, state: BssRuntimeState, n_slots: int, duration_s: float) -> List[IterationMetrics]:
        metrics = []
        for i in range(self.n):
            accesses = int(state.accesses[i])
            if accesses:
                delay_ms = state.delay_slots[i] * self.mac.slot_us / accesses / 1000.0
            else:
                delay_ms = duration_s * 1000.0
            metrics.append(IterationMetrics(
                throughput_mbps=float(state.delivered_bits[i]) / (duration_s * 1e6),
                airtime_frac=float(state.airtime_slots[i]) / n_slots,
                mean_access_delay_ms=float(delay_ms),
                nav_frac=float(state.nav_slots[i]) / n_slots,
                tx_attempts=int(state.attempts[i]),
                tx_failures=int(state.failures[i]),
            ))
        return metrics


def simulate_iteration(
    deployment: Deployment,
    joint_action: Sequence[Action],
    duration_s: float,
    rng: np.random.Generator,
) -> List[IterationMetrics]:
    """Per-BSS metrics for one iteration of `duration_s` under `joint_action`."""
    return SlotSimulator(deployment, joint_action).run(duration_s, rng).metrics
