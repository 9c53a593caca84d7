import itertools
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np
import orjson
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from constants import ScenarioValidationError
from environment.base import EnvStep, Environment

logger = logging.getLogger(__name__)

DEFAULT_TOY_PAYOFF = Path(__file__).resolve().parent.parent / "config" / "toy_payoff.json"


@dataclass(frozen=True)
class PayoffMatrix:
    """Normalised throughput per agent for every joint action profile.

    `table` has shape (n_actions,) * n_agents + (n_agents,).
    """

    table: np.ndarray
    noise_std: float = 0.0

    def __post_init__(self):
        if self.table.ndim < 2 or self.table.shape[-1] != self.table.ndim - 1:
            raise ScenarioValidationError(f"payoff table has inconsistent shape {self.table.shape}", "entries")
        if np.isnan(self.table).any():
            raise ScenarioValidationError("payoff table is not fully populated", "entries")
        if (self.table < 0).any() or (self.table > 1).any():
            raise ScenarioValidationError("payoff entries must lie in [0, 1]", "entries")
        if self.noise_std < 0:
            raise ScenarioValidationError("noise_std must be non-negative", "noise_std")

    @property
    def n_agents(self) -> int:
        return self.table.ndim - 1

    @property
    def n_actions(self) -> int:
        return self.table.shape[0]

    def profiles(self):
        return itertools.product(range(self.n_actions), repeat=self.n_agents)


class _PayoffFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    actions: int = Field(ge=1)
    agents: int = Field(ge=1)
    noise_std: float = Field(0.0, ge=0)
    entries: Dict[str, List[float]]


def load_payoff_matrix(path=DEFAULT_TOY_PAYOFF) -> PayoffMatrix:
    path = Path(path)
    try:
        raw = _PayoffFile.model_validate(orjson.loads(path.read_bytes()))
    except FileNotFoundError as e:
        raise ScenarioValidationError(f"payoff file not found: {path}") from e
    except orjson.JSONDecodeError as e:
        raise ScenarioValidationError(f"cannot parse {path}: {e}") from e
    except ValidationError as e:
        err = e.errors()[0]
        raise ScenarioValidationError(err["msg"], ".".join(str(p) for p in err["loc"])) from e

    table = np.full((raw.actions,) * raw.agents + (raw.agents,), np.nan)
    for key, values in raw.entries.items():
        try:
            profile = tuple(int(k) for k in key.split(","))
        except ValueError as e:
            raise ScenarioValidationError(f"bad profile key {key!r}", f"entries.{key}") from e
        if len(profile) != raw.agents or len(values) != raw.agents:
            raise ScenarioValidationError("entry does not match the number of agents", f"entries.{key}")
        if any(not 0 <= k < raw.actions for k in profile):
            raise ScenarioValidationError("action index out of range", f"entries.{key}")
        table[profile] = values
    return PayoffMatrix(table=table, noise_std=raw.noise_std)


def save_payoff_matrix(matrix: PayoffMatrix, path) -> None:
    entries = {
        ",".join(str(k) for k in profile): [round(float(v), 6) for v in matrix.table[profile]]
        for profile in matrix.profiles()
    }
    doc = {
        "actions": matrix.n_actions,
        "agents": matrix.n_agents,
        "noise_std": round(float(matrix.noise_std), 6),
        "entries": entries,
    }
    Path(path).write_bytes(orjson.dumps(doc, option=orjson.OPT_INDENT_2))


class MatrixGameEnv(Environment):
    """Table lookup plus clamped Gaussian noise."""

    def __init__(self, matrix: PayoffMatrix):
        super().__init__(matrix.n_agents, matrix.n_actions)
        self.matrix = matrix

    def step(self, joint_action: Sequence[int], rng: np.random.Generator) -> EnvStep:
        profile = self.check_joint_action(joint_action)
        values = self.matrix.table[profile].copy()
        if self.matrix.noise_std > 0:
            values = np.clip(values + rng.normal(0.0, self.matrix.noise_std, self.n_agents), 0.0, 1.0)
        return EnvStep(normalized=tuple(float(v) for v in values))
