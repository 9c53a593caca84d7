import os
import tempfile
from pathlib import Path

# index.py and the CLI open the ledger at import/startup; keep them out of the working tree
_SCRATCH = tempfile.mkdtemp(prefix="spatial-reuse-tests-")
os.environ.setdefault("SR_DATABASE_URL", f"sqlite:///{_SCRATCH}/ledger.db")
os.environ.setdefault("SR_LOG_DIR", os.path.join(_SCRATCH, "logs"))
os.environ.setdefault("SR_WORKERS", "1")

import pytest

from db.setup import setup
from scenario.actions import enumerate_actions
from scenario.loader import load_scenario
from scenario.models import Bss, Deployment

CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"
TOY_SCENARIO = CONFIG_DIR / "toy_scenario.json"
GRID_SCENARIO = CONFIG_DIR / "grid_scenario.json"
TOY_PAYOFF = CONFIG_DIR / "toy_payoff.json"


@pytest.fixture
def toy_deployment():
    return load_scenario(TOY_SCENARIO).deployment()


@pytest.fixture
def single_bss():
    return Deployment(bsses=[Bss(id=0, ap_pos=(0.0, 0.0), sta_pos=[(2.0, 0.0)])], channels=(1,))


@pytest.fixture
def action_space():
    return enumerate_actions([-72, -82], [10, 20])


@pytest.fixture
def session_maker(tmp_path):
    return setup(f"sqlite:///{tmp_path}/runs.db")


@pytest.fixture
def experiment_data(tmp_path):
    """A short matrix-game experiment that runs in well under a second."""
    return {
        "name": "test",
        "scenario": str(TOY_SCENARIO),
        "environment": "matrix",
        "payoff": str(TOY_PAYOFF),
        "strategy": "egreedy",
        "reward": "avg",
        "sim_time_s": 10,
        "delta_s": 0.5,
        "drops": 2,
        "base_seed": 7,
        "out_dir": str(tmp_path / "out"),
    }
