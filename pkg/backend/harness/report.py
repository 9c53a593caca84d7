import logging
from pathlib import Path
from typing import Optional

import pandas as pd

import constants
from constants import InputValidationError
from harness.export import export, read_manifest
from harness.summary import RunSummary, summarize

logger = logging.getLogger(__name__)


def report(in_dir, out_dir=None, last_window_frac: Optional[float] = None, transitory_frac: Optional[float] = None) -> RunSummary:
    """Recompute the summary tables of a finished run from its trace.csv.

    Window fractions default to the ones the run was configured with.
    """
    in_dir = Path(in_dir)
    trace_path = in_dir / constants.TRACE_FILE
    if not trace_path.exists():
        raise InputValidationError(f"no {constants.TRACE_FILE} in {in_dir}")
    try:
        manifest = read_manifest(in_dir)
    except FileNotFoundError as e:
        raise InputValidationError(f"no {constants.MANIFEST_FILE} in {in_dir}") from e

    trace = pd.read_csv(trace_path)
    missing = set(constants.TRACE_COLUMNS) - set(trace.columns)
    if missing:
        raise InputValidationError(f"{trace_path} lacks columns: {', '.join(sorted(missing))}")

    config = manifest["config"]
    drop_status = None
    drops_path = in_dir / constants.DROPS_FILE
    if drops_path.exists():
        # failed drops have no trace rows; keep their status from the original run
        drop_status = pd.read_csv(drops_path, dtype={"seed": str}, keep_default_na=False)[["drop", "seed", "status", "error"]]

    summary = summarize(
        trace,
        n_actions=len(manifest["actions"]),
        iterations=int(manifest["iterations"]),
        last_window_frac=last_window_frac or config["last_window_frac"],
        transitory_frac=transitory_frac or config["transitory_frac"],
        drop_status=drop_status,
    )
    out_dir = Path(out_dir) if out_dir else in_dir
    export(summary, out_dir, include_trace=out_dir != in_dir)
    logger.info(f"Re-aggregated {manifest['label']} from {in_dir}")
    return summary
