"""Link budget helpers.

Scalar inputs return floats; array inputs broadcast, which is how the
simulator builds its AP-to-AP and AP-to-STA power matrices.
"""
import math
from typing import Final, Iterable

import numpy as np

NO_POWER_DBM: Final[float] = float("-inf")


def path_loss_db(distance_m, radio):
    """Log-distance loss with fixed shadowing and distance-proportional obstacle margins."""
    d = np.maximum(np.asarray(distance_m, dtype=float), 1.0)
    loss = (
        radio.pl0_db
        + 10.0 * radio.pathloss_exponent * np.log10(d)
        + radio.shadowing_db / 2.0
        + (radio.obstacles_db / 2.0) * (d / 10.0)
    )
    return float(loss) if loss.ndim == 0 else loss


def rx_power_dbm(tx_dbm, distance_m, radio):
    rx = np.asarray(tx_dbm, dtype=float) + radio.tx_gain_dbi + radio.rx_gain_dbi - path_loss_db(distance_m, radio)
    return float(rx) if np.ndim(rx) == 0 else rx


def combine_powers_dbm(levels: Iterable[float]) -> float:
    """Sum powers in the linear domain; an empty set is NO_POWER_DBM."""
    levels = np.asarray(list(levels), dtype=float)
    levels = levels[np.isfinite(levels)]
    if levels.size == 0:
        return NO_POWER_DBM
    peak = levels.max()
    # factor out the peak so very small levels do not underflow
    return float(peak + 10.0 * math.log10(np.sum(10.0 ** ((levels - peak) / 10.0))))


def sinr_db(signal_dbm: float, interferers: Iterable[float], noise_dbm: float) -> float:
    return signal_dbm - combine_powers_dbm([*interferers, noise_dbm])


def distances_m(points_a, points_b):
    """Pairwise euclidean distances between two (n, 2) coordinate arrays."""
    a = np.asarray(points_a, dtype=float)[:, None, :]
    b = np.asarray(points_b, dtype=float)[None, :, :]
    return np.sqrt(np.sum((a - b) ** 2, axis=-1))
