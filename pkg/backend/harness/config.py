from pathlib import Path
from typing import Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

import constants
from bandit.policies import EXPLOIT_LAST, EXPLOIT_MEAN
from constants import ConfigurationError
from coordination.rewards import RewardKind, RewardStrategy

STRATEGIES = (
    constants.STRATEGY_EGREEDY,
    constants.STRATEGY_THOMPSON,
    constants.STRATEGY_STATIC_OBSSPD,
    constants.STRATEGY_STATIC_DCF,
)
STATIC_STRATEGIES = (constants.STRATEGY_STATIC_OBSSPD, constants.STRATEGY_STATIC_DCF)


class ExperimentConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: Optional[str] = None
    scenario: str
    environment: str = constants.ENV_OBSS
    payoff: Optional[str] = None
    strategy: str = constants.STRATEGY_EGREEDY
    reward: RewardKind = RewardKind.SELF
    pf_floor: float = Field(constants.PF_FLOOR, gt=0)
    sim_time_s: float = Field(constants.SIM_TIME_S, gt=0)
    delta_s: float = Field(constants.DELTA_S, gt=0)
    drops: Optional[int] = Field(None, ge=1)
    base_seed: int = Field(0, ge=0)
    out_dir: str = "results"
    eps0: float = Field(constants.EPS0, ge=0, le=1)
    warmup_rounds: int = Field(constants.EPS_WARMUP_ROUNDS, ge=0)
    exploit_statistic: str = EXPLOIT_MEAN
    literal_denominator: bool = False
    last_window_frac: float = Field(constants.LAST_WINDOW_FRAC, gt=0, le=1)
    transitory_frac: float = Field(constants.TRANSITORY_FRAC, gt=0, le=1)

    @model_validator(mode="after")
    def _check(self):
        if self.environment not in (constants.ENV_MATRIX, constants.ENV_OBSS):
            raise ConfigurationError(f"Unknown environment kind: {self.environment}")
        if self.strategy not in STRATEGIES:
            raise ConfigurationError(f"Unknown strategy: {self.strategy}")
        if self.exploit_statistic not in (EXPLOIT_MEAN, EXPLOIT_LAST):
            raise ConfigurationError(f"Unknown exploit statistic: {self.exploit_statistic}")
        ratio = self.sim_time_s / self.delta_s
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ConfigurationError(
                f"sim_time_s / delta_s must be a positive integer, got {self.sim_time_s} / {self.delta_s}"
            )
        return self

    @property
    def iterations(self) -> int:
        return int(round(self.sim_time_s / self.delta_s))

    @property
    def reward_strategy(self) -> RewardStrategy:
        return RewardStrategy(kind=self.reward, pf_floor=self.pf_floor)

    @property
    def is_static(self) -> bool:
        return self.strategy in STATIC_STRATEGIES

    @property
    def label(self) -> str:
        """Configuration name in the style used for comparison tables."""
        if self.strategy == constants.STRATEGY_STATIC_OBSSPD:
            return "OBSS-PD"
        if self.strategy == constants.STRATEGY_STATIC_DCF:
            return "DCF"
        if self.reward is RewardKind.SELF:
            return f"{self.strategy}-SELF"
        return f"Coord-{self.strategy}-{self.reward.name}"


def parse_experiment(data: dict, base_dir: Optional[Path] = None) -> ExperimentConfig:
    """Validate an experiment mapping; relative file paths resolve against base_dir."""
    data = dict(data)
    if base_dir is not None:
        for key in ("scenario", "payoff"):
            if data.get(key) and not Path(data[key]).is_absolute():
                data[key] = str((base_dir / data[key]).resolve())
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        err = e.errors()[0]
        path = ".".join(str(p) for p in err["loc"])
        raise ConfigurationError(f"{path}: {err['msg']}" if path else err["msg"]) from e


def load_experiment(path, **overrides) -> ExperimentConfig:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text()) or {}
    except FileNotFoundError as e:
        raise ConfigurationError(f"experiment file not found: {path}") from e
    except yaml.YAMLError as e:
        raise ConfigurationError(f"cannot parse {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigurationError("experiment file must hold a mapping")
    data.update({k: v for k, v in overrides.items() if v is not None})
    return parse_experiment(data, path.parent)
