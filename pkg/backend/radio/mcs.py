from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

import constants
from constants import ConfigurationError, ScenarioValidationError

MCS_COUNT = 12


class McsTable(BaseModel):
    """Per-index modulation order, coding rate and minimum SINR for MCS 0..11."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    bits_per_subcarrier: Tuple[int, ...] = constants.MCS_BITS_PER_SUBCARRIER
    coding_rates: Tuple[float, ...] = constants.MCS_CODING_RATES
    thresholds_db: Tuple[float, ...] = constants.MCS_SINR_THRESHOLDS_DB

    @model_validator(mode="after")
    def _check_shape(self):
        for name in ("bits_per_subcarrier", "coding_rates", "thresholds_db"):
            if len(getattr(self, name)) != MCS_COUNT:
                raise ScenarioValidationError(f"expected {MCS_COUNT} entries", f"mcs_{name}")
        if np.any(np.diff(self.thresholds_db) <= 0):
            raise ScenarioValidationError("thresholds must be strictly increasing", "mcs_thresholds_db")
        return self

    @classmethod
    def with_thresholds(cls, thresholds_db) -> "McsTable":
        return cls(thresholds_db=tuple(float(t) for t in thresholds_db))


DEFAULT_MCS_TABLE = McsTable()


def select_mcs(sinr_db: float, table: McsTable = DEFAULT_MCS_TABLE) -> Optional[int]:
    """Highest MCS whose threshold the SINR meets, or None when nothing decodes."""
    if np.isnan(sinr_db):
        return None
    idx = int(np.searchsorted(table.thresholds_db, sinr_db, side="right")) - 1
    return idx if idx >= 0 else None


def phy_rate_mbps(mcs: int, radio, table: McsTable = DEFAULT_MCS_TABLE) -> float:
    """OFDM data rate for one MCS: N_SD * N_BPSCS * R_c * S / (T_DFT + GI)."""
    if not 0 <= mcs < MCS_COUNT:
        raise ConfigurationError(f"MCS index out of range: {mcs}")
    if radio.bandwidth_mhz not in constants.SUPPORTED_BANDWIDTHS_MHZ:
        raise ConfigurationError(f"Unsupported bandwidth: {radio.bandwidth_mhz} MHz")
    bits_per_symbol = (
        constants.DATA_SUBCARRIERS_20MHZ
        * table.bits_per_subcarrier[mcs]
        * table.coding_rates[mcs]
        * radio.spatial_streams
    )
    # bits per microsecond == Mbps
    return bits_per_symbol / (constants.T_DFT_US + radio.guard_interval_us)
