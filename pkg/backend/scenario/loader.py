import logging
from pathlib import Path
from typing import List, Optional

import numpy as np
import orjson
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from constants import ScenarioValidationError
from radio.mcs import McsTable
from scenario.actions import enumerate_actions
from scenario.grid import generate_grid_drop
from scenario.models import ActionLevels, ActionSpace, Bss, Deployment, GridSpec, MacParams, RadioParams

logger = logging.getLogger(__name__)


class ScenarioFile(BaseModel):
    """On-disk scenario: explicit `bsses` or a `grid` generator, plus overrides."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: Optional[str] = None
    radio: RadioParams = RadioParams()
    mac: MacParams = MacParams()
    mcs_thresholds_db: Optional[List[float]] = None
    channels: Optional[List[int]] = None
    bsses: Optional[List[Bss]] = None
    grid: Optional[GridSpec] = None
    actions: ActionLevels = ActionLevels()

    @model_validator(mode="after")
    def _one_mode(self):
        if (self.bsses is None) == (self.grid is None):
            raise ScenarioValidationError("exactly one of 'bsses' or 'grid' is required", "bsses")
        return self

    @property
    def is_grid(self) -> bool:
        return self.grid is not None

    def mcs_table(self) -> McsTable:
        if self.mcs_thresholds_db is None:
            return McsTable()
        return McsTable.with_thresholds(self.mcs_thresholds_db)

    def action_space(self) -> ActionSpace:
        return enumerate_actions(self.actions.pd_dbm, self.actions.tx_power_dbm, self.radio.noise_dbm)

    def deployment(self, rng: Optional[np.random.Generator] = None) -> Deployment:
        """Explicit deployments ignore rng; grid scenarios need one per drop."""
        if self.grid is not None:
            if rng is None:
                raise ScenarioValidationError("grid scenarios need a random stream per drop", "grid")
            return generate_grid_drop(self.grid, self.radio, self.mac, rng, self.mcs_table())
        extra = {"channels": tuple(self.channels)} if self.channels else {}
        return _validated(
            Deployment,
            dict(bsses=self.bsses, radio=self.radio, mac=self.mac, mcs=self.mcs_table(), **extra),
        )


def _validated(model, data, prefix: str = ""):
    """Build a pydantic model, reporting the first failure with its dotted field path."""
    try:
        return model.model_validate(data)
    except ValidationError as e:
        err = e.errors()[0]
        path = ".".join(str(part) for part in (prefix, *err["loc"]) if part != "")
        raise ScenarioValidationError(err["msg"], path) from e


def parse_scenario(data: dict) -> ScenarioFile:
    scenario = _validated(ScenarioFile, data)
    # surfaces action and MCS errors at load time rather than mid-run
    scenario.action_space()
    scenario.mcs_table()
    if not scenario.is_grid:
        scenario.deployment()
    return scenario


def load_scenario(path) -> ScenarioFile:
    path = Path(path)
    try:
        data = orjson.loads(path.read_bytes())
    except FileNotFoundError as e:
        raise ScenarioValidationError(f"scenario file not found: {path}") from e
    except orjson.JSONDecodeError as e:
        raise ScenarioValidationError(f"cannot parse {path}: {e}") from e
    if not isinstance(data, dict):
        raise ScenarioValidationError("scenario must be a JSON object")
    scenario = parse_scenario(data)
    logger.info(f"Loaded scenario {scenario.name or path.stem} ({'grid' if scenario.is_grid else 'explicit'})")
    return scenario


def load_deployment(path, rng: Optional[np.random.Generator] = None) -> Deployment:
    return load_scenario(path).deployment(rng)
