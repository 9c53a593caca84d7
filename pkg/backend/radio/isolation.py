import logging
from typing import List

import numpy as np

import constants
from constants import ConfigurationError
from obss_sim.simulator import SlotSimulator
from scenario.models import Action, Bss, Deployment

logger = logging.getLogger(__name__)


def isolation_throughput_mbps(
    bss: Bss,
    deployment: Deployment,
    duration_s: float = constants.DELTA_S,
    iterations: int = constants.ISOLATION_ITERATIONS,
) -> float:
    """Throughput of `bss` with every other BSS silent, at full power and default CCA.

    Averaged over a fixed, seeded set of iterations so the normaliser is the
    same on every call.
    """
    alone = deployment.only(bss.id)
    radio = deployment.radio
    sim = SlotSimulator(alone, [Action(tx_power_dbm=radio.default_tx_power_dbm, pd_dbm=radio.default_cca_dbm)])
    rng = np.random.default_rng(constants.ISOLATION_SEED)
    samples = [sim.run(duration_s, rng).metrics[0].throughput_mbps for _ in range(iterations)]
    gamma = float(np.mean(samples))
    if gamma <= 0:
        raise ConfigurationError(f"BSS {bss.id} cannot decode any MCS even in isolation")
    return gamma


def isolation_throughputs(deployment: Deployment, duration_s: float = constants.DELTA_S) -> List[float]:
    gammas = [isolation_throughput_mbps(b, deployment, duration_s) for b in deployment.ordered()]
    logger.debug(f"Isolation throughputs (Mbps): {[round(g, 3) for g in gammas]}")
    return gammas
