import math
from typing import Optional, Sequence

from constants import ScenarioValidationError
from scenario.models import Action, ActionSpace


def _check_levels(levels: Sequence[float], field: str) -> None:
    if len(levels) == 0:
        raise ScenarioValidationError("at least one level is required", field)
    for idx, level in enumerate(levels):
        if not math.isfinite(level):
            raise ScenarioValidationError(f"level {level} is not finite", f"{field}.{idx}")
    if len(set(levels)) != len(levels):
        dupes = sorted({lv for lv in levels if list(levels).count(lv) > 1})
        raise ScenarioValidationError(f"duplicate levels {dupes}", field)


def enumerate_actions(
    pd_levels: Sequence[float],
    power_levels: Sequence[float],
    noise_dbm: Optional[float] = None,
) -> ActionSpace:
    """Cartesian product of power and PD levels.

    Ordered by transmit power ascending, then PD descending, so that with
    PD {-72, -82} and power {10, 20} index 0 is (10 dBm, -72 dBm).
    """
    _check_levels(pd_levels, "actions.pd_dbm")
    _check_levels(power_levels, "actions.tx_power_dbm")
    if noise_dbm is not None:
        for idx, pd in enumerate(pd_levels):
            if pd < noise_dbm:
                raise ScenarioValidationError(
                    f"PD {pd} dBm is below the {noise_dbm} dBm noise floor", f"actions.pd_dbm.{idx}"
                )
    return ActionSpace(
        actions=tuple(
            Action(tx_power_dbm=float(power), pd_dbm=float(pd))
            for power in sorted(power_levels)
            for pd in sorted(pd_levels, reverse=True)
        )
    )
