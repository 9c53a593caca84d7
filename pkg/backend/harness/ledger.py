"""Experiment bookkeeping in the results database."""
import logging
import math
from datetime import datetime

import orjson
from sqlalchemy.exc import OperationalError
from tenacity import retry, retry_if_exception_type, stop_after_attempt, wait_exponential

from db.models import DropResult, ExperimentRun
from harness.config import ExperimentConfig
from harness.summary import RunSummary

logger = logging.getLogger(__name__)

# sqlite reports lock contention as OperationalError when runs share a file
_retry_locked = retry(
    retry=retry_if_exception_type(OperationalError),
    stop=stop_after_attempt(5),
    wait=wait_exponential(multiplier=0.2, max=2),
    reraise=True,
)


def _num(value):
    if value is None:
        return None
    value = float(value)
    return None if math.isnan(value) else value


@_retry_locked
def start_run(session_maker, config: ExperimentConfig, manifest: dict) -> int:
    with session_maker() as session:
        run = ExperimentRun(
            name=config.name,
            label=config.label,
            environment=config.environment,
            strategy=config.strategy,
            reward=config.reward.value,
            base_seed=config.base_seed,
            drops=manifest["drops"],
            iterations=config.iterations,
            out_dir=str(config.out_dir),
            manifest=orjson.dumps(manifest, option=orjson.OPT_SORT_KEYS).decode(),
        )
        session.add(run)
        session.commit()
        logger.info(f"Registered run {run.id} ({run.label})")
        return run.id


@_retry_locked
def finish_run(session_maker, run_id: int, summary: RunSummary = None, status: str = "completed") -> None:
    with session_maker() as session:
        run = session.get(ExperimentRun, run_id)
        if run is None:
            logger.warning(f"Run {run_id} vanished from the ledger")
            return
        if summary is not None:
            for row in summary.drops.itertuples(index=False):
                session.add(DropResult(
                    run_id=run_id,
                    drop=int(row.drop),
                    seed=str(getattr(row, "seed", "")),
                    status=row.status,
                    error=row.error or None,
                    mean_throughput_mbps=_num(row.mean_throughput_mbps),
                    min_throughput_mbps=_num(row.min_throughput_mbps),
                    max_throughput_mbps=_num(row.max_throughput_mbps),
                    max_delay_ms=_num(row.max_delay_ms),
                    mean_reward=_num(row.mean_reward),
                    jain_fairness=_num(row.jain_fairness),
                    modal_action=None if _num(row.modal_action) is None else int(row.modal_action),
                ))
        run.status = status
        run.finished_at = datetime.utcnow()
        session.commit()
