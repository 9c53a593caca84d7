import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

import constants
from constants import ScenarioValidationError
from radio.mcs import DEFAULT_MCS_TABLE, McsTable

Position = Tuple[float, float]


class RadioParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    carrier_freq_ghz: float = Field(constants.CARRIER_FREQ_GHZ, gt=0)
    bandwidth_mhz: float = Field(constants.BANDWIDTH_MHZ, gt=0)
    guard_interval_us: float = Field(constants.GUARD_INTERVAL_US, ge=0)
    noise_dbm: float = constants.NOISE_DBM
    default_tx_power_dbm: float = constants.DEFAULT_TX_POWER_DBM
    default_cca_dbm: float = constants.DEFAULT_CCA_DBM
    spatial_streams: int = Field(constants.SPATIAL_STREAMS, ge=1)
    tx_gain_dbi: float = constants.TX_GAIN_DBI
    rx_gain_dbi: float = constants.RX_GAIN_DBI
    capture_threshold_db: float = constants.CAPTURE_THRESHOLD_DB
    pl0_db: float = constants.PL0_DB
    pathloss_exponent: float = Field(constants.PATHLOSS_EXPONENT, gt=0)
    shadowing_db: float = constants.SHADOWING_DB
    obstacles_db: float = constants.OBSTACLES_DB

    @model_validator(mode="after")
    def _check(self):
        if self.noise_dbm >= self.default_cca_dbm:
            raise ScenarioValidationError("noise floor must sit below the CCA level", "radio.noise_dbm")
        if self.bandwidth_mhz not in constants.SUPPORTED_BANDWIDTHS_MHZ:
            raise ScenarioValidationError(
                f"only {constants.SUPPORTED_BANDWIDTHS_MHZ} MHz channels are modelled", "radio.bandwidth_mhz"
            )
        return self


class MacParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    txop_limit_us: float = Field(constants.TXOP_LIMIT_US, gt=0)
    ampdu_max: int = Field(constants.AMPDU_MAX, ge=1)
    data_len_bytes: int = Field(constants.DATA_LEN_BYTES, ge=0)
    cw0: int = Field(constants.CW0, ge=2)
    cwe_min: int = Field(constants.CWE_MIN, ge=0)
    cwe_max: int = Field(constants.CWE_MAX, ge=0)
    slot_us: float = Field(constants.SLOT_US, gt=0)
    overhead_us_per_txop: float = Field(constants.OVERHEAD_US_PER_TXOP, ge=0)

    @model_validator(mode="after")
    def _check(self):
        if self.cwe_min > self.cwe_max:
            raise ScenarioValidationError("cwe_min must not exceed cwe_max", "mac.cwe_min")
        return self


class Bss(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: int = Field(ge=0)
    ap_pos: Position
    sta_pos: List[Position] = Field(min_length=1)
    channel: int = Field(1, ge=1)

    @field_validator("ap_pos")
    @classmethod
    def _finite_ap(cls, value):
        if not all(math.isfinite(v) for v in value):
            raise ValueError("coordinates must be finite")
        return value

    @field_validator("sta_pos")
    @classmethod
    def _finite_stas(cls, value):
        for pos in value:
            if not all(math.isfinite(v) for v in pos):
                raise ValueError("coordinates must be finite")
        return value


class Deployment(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    bsses: List[Bss] = Field(min_length=1)
    radio: RadioParams = RadioParams()
    mac: MacParams = MacParams()
    mcs: McsTable = DEFAULT_MCS_TABLE
    channels: Tuple[int, ...] = tuple(range(1, constants.FREQ_REUSE + 1))

    @model_validator(mode="after")
    def _check(self):
        seen = set()
        for idx, bss in enumerate(self.bsses):
            if bss.id in seen:
                raise ScenarioValidationError(f"duplicate BSS id {bss.id}", f"bsses.{idx}.id")
            seen.add(bss.id)
            if bss.channel not in self.channels:
                raise ScenarioValidationError(
                    f"channel {bss.channel} not in allowed set {list(self.channels)}", f"bsses.{idx}.channel"
                )
        if seen != set(range(len(self.bsses))):
            missing = min(set(range(len(self.bsses))) - seen)
            raise ScenarioValidationError(f"BSS ids must be contiguous from 0, id {missing} is missing", "bsses")
        return self

    def ordered(self) -> List[Bss]:
        return sorted(self.bsses, key=lambda b: b.id)

    def only(self, bss_id: int) -> "Deployment":
        """The same deployment with a single BSS, renumbered to id 0."""
        bss = next(b for b in self.bsses if b.id == bss_id)
        return self.model_copy(update={"bsses": [bss.model_copy(update={"id": 0})]})


class Action(BaseModel):
    model_config = ConfigDict(frozen=True)

    tx_power_dbm: float
    pd_dbm: float


class ActionSpace(BaseModel):
    model_config = ConfigDict(frozen=True)

    actions: Tuple[Action, ...]

    def __len__(self) -> int:
        return len(self.actions)

    def __getitem__(self, index: int) -> Action:
        return self.actions[index]

    def __iter__(self):
        return iter(self.actions)

    def index_of(self, tx_power_dbm: float, pd_dbm: float) -> Optional[int]:
        for idx, action in enumerate(self.actions):
            if action.tx_power_dbm == tx_power_dbm and action.pd_dbm == pd_dbm:
                return idx
        return None

    @staticmethod
    def name(index: int) -> str:
        return f"A{index + 1}"


class GridSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    rows: int = Field(constants.GRID_ROWS, ge=1)
    cols: int = Field(constants.GRID_COLS, ge=1)
    side_m: float = Field(constants.GRID_SIDE_M, gt=0)
    coverage_diameter_m: float = Field(constants.COVERAGE_DIAMETER_M, gt=0)
    freq_reuse: int = Field(constants.FREQ_REUSE, ge=1)
    drops: int = Field(constants.GRID_DROPS, ge=1)

    @model_validator(mode="after")
    def _check(self):
        if self.coverage_diameter_m >= self.side_m / max(self.rows, self.cols):
            raise ScenarioValidationError("coverage disk must fit inside one cubicle", "grid.coverage_diameter_m")
        return self


class ActionLevels(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    pd_dbm: List[float] = Field(default_factory=lambda: list(constants.PD_LEVELS_DBM))
    tx_power_dbm: List[float] = Field(default_factory=lambda: list(constants.TX_POWER_LEVELS_DBM))
