import logging
from pathlib import Path
from typing import List

import orjson
import pandas as pd

import constants
from harness.summary import RunSummary

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.10g"


def _write_csv(df: pd.DataFrame, path: Path) -> Path:
    df.to_csv(path, index=False, float_format=FLOAT_FORMAT, na_rep="", lineterminator="\n")
    return path


def write_manifest(manifest: dict, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / constants.MANIFEST_FILE
    path.write_bytes(orjson.dumps(manifest, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS))
    return path


def read_manifest(in_dir) -> dict:
    return orjson.loads((Path(in_dir) / constants.MANIFEST_FILE).read_bytes())


def export(summary: RunSummary, out_dir, include_trace: bool = True) -> List[Path]:
    """Write the CSV tables of a run; files are overwritten."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if include_trace:
        written.append(_write_csv(summary.trace[list(constants.TRACE_COLUMNS)], out / constants.TRACE_FILE))
    written.append(_write_csv(summary.summary, out / constants.SUMMARY_FILE))
    written.append(_write_csv(summary.actions, out / constants.ACTIONS_FILE))
    written.append(_write_csv(summary.drops, out / constants.DROPS_FILE))
    written.append(_write_csv(summary.timeline, out / constants.TIMELINE_FILE))
    for name, cdf in summary.cdfs.items():
        written.append(_write_csv(cdf, out / f"cdf_{name}.csv"))
    logger.info(f"Wrote {len(written)} result files to {out}")
    return written
