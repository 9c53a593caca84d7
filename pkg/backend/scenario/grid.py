import numpy as np

from radio.mcs import DEFAULT_MCS_TABLE, McsTable
from scenario.models import Bss, Deployment, GridSpec, MacParams, RadioParams


def cubicle_centers(spec: GridSpec) -> np.ndarray:
    """(rows*cols, 2) AP coordinates, row-major from the origin corner."""
    cell_w = spec.side_m / spec.cols
    cell_h = spec.side_m / spec.rows
    return np.array(
        [((c + 0.5) * cell_w, (r + 0.5) * cell_h) for r in range(spec.rows) for c in range(spec.cols)],
        dtype=float,
    )


def generate_grid_drop(
    spec: GridSpec,
    radio: RadioParams,
    mac: MacParams,
    rng: np.random.Generator,
    mcs: McsTable = DEFAULT_MCS_TABLE,
) -> Deployment:
    """One random drop: an AP per cubicle, one STA in its coverage disk, a random channel."""
    centers = cubicle_centers(spec)
    n = len(centers)

    radius = spec.coverage_diameter_m / 2.0
    # sqrt keeps the STA density uniform over the disk area
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    stas = centers + np.column_stack((r * np.cos(theta), r * np.sin(theta)))
    channels = rng.integers(1, spec.freq_reuse + 1, size=n)

    bsses = [
        Bss(
            id=i,
            ap_pos=(float(centers[i, 0]), float(centers[i, 1])),
            sta_pos=[(float(stas[i, 0]), float(stas[i, 1]))],
            channel=int(channels[i]),
        )
        for i in range(n)
    ]
    return Deployment(
        bsses=bsses,
        radio=radio,
        mac=mac,
        mcs=mcs,
        channels=tuple(range(1, spec.freq_reuse + 1)),
    )
