from flask import Flask, request, jsonify
from flask_cors import CORS
from dotenv import load_dotenv
import logging
import os
from sqlalchemy import func

from db.setup import setup
from utils.logging_config import setup_logging
from harness.export import read_manifest

from db.models import ExperimentRun, DropResult, Log

load_dotenv()
app = Flask(__name__)
CORS(app)

# setup database first
Session = setup()

# setup logging with the session maker
setup_logging(Session)
logger = logging.getLogger(__name__)


def _run_json(run):
    return {
        "id": run.id,
        "name": run.name,
        "label": run.label,
        "environment": run.environment,
        "strategy": run.strategy,
        "reward": run.reward,
        "baseSeed": run.base_seed,
        "drops": run.drops,
        "iterations": run.iterations,
        "outDir": run.out_dir,
        "status": run.status,
        "createdAt": run.created_at.isoformat() if run.created_at else None,
        "finishedAt": run.finished_at.isoformat() if run.finished_at else None,
    }


@app.route("/api/runs", methods=['GET'])
def get_runs():
    try:
        with Session() as session:
            query = session.query(ExperimentRun)
            status = request.args.get('status')
            if status:
                query = query.filter(ExperimentRun.status == status)
            runs = query.order_by(ExperimentRun.created_at.desc()).all()
            return jsonify({"runs": [_run_json(run) for run in runs]})
    except Exception as e:
        logger.error(f"Error fetching runs: {str(e)}")
        return jsonify({"error": "Failed to fetch runs"}), 500

@app.route("/api/runs/<int:run_id>", methods=['GET'])
def get_run(run_id):
    try:
        with Session() as session:
            run = session.get(ExperimentRun, run_id)
            if run is None:
                return jsonify({"error": "Run not found"}), 404
            data = _run_json(run)

            # the summary lives next to the manifest once the run has finished
            summary_path = os.path.join(run.out_dir, 'summary.csv')
            data["hasSummary"] = os.path.exists(summary_path)
            try:
                data["actions"] = read_manifest(run.out_dir)["actions"]
            except FileNotFoundError:
                data["actions"] = []
            return jsonify(data)
    except Exception as e:
        logger.error(f"Error fetching run {run_id}: {str(e)}")
        return jsonify({"error": "Failed to fetch run"}), 500

@app.route("/api/runs/<int:run_id>/drops", methods=['GET'])
def get_run_drops(run_id):
    try:
        with Session() as session:
            if session.get(ExperimentRun, run_id) is None:
                return jsonify({"error": "Run not found"}), 404
            drops = session.query(DropResult)\
                .filter(DropResult.run_id == run_id)\
                .order_by(DropResult.drop)\
                .all()

            return jsonify({
                "drops": [{
                    "drop": d.drop,
                    "seed": d.seed,
                    "status": d.status,
                    "error": d.error,
                    "meanThroughputMbps": d.mean_throughput_mbps,
                    "minThroughputMbps": d.min_throughput_mbps,
                    "maxThroughputMbps": d.max_throughput_mbps,
                    "maxDelayMs": d.max_delay_ms,
                    "meanReward": d.mean_reward,
                    "jainFairness": d.jain_fairness,
                    "modalAction": d.modal_action
                } for d in drops]
            })
    except Exception as e:
        logger.error(f"Error fetching drops for run {run_id}: {str(e)}")
        return jsonify({"error": "Failed to fetch drops"}), 500

@app.route("/api/runs/<int:run_id>/logs", methods=['GET'])
def get_run_logs(run_id):
    try:
        with Session() as session:
            limit = request.args.get('limit', default=100, type=int)
            logs = session.query(Log)\
                .filter(Log.run_id == run_id)\
                .order_by(Log.timestamp.desc())\
                .limit(limit)\
                .all()

            return jsonify({
                "logs": [{
                    "id": log.id,
                    "timestamp": log.timestamp.isoformat(),
                    "level": log.level,
                    "source": log.source,
                    "message": log.message
                } for log in logs]
            })
    except Exception as e:
        logger.error(f"Error fetching logs for run {run_id}: {str(e)}")
        return jsonify({"error": "Failed to fetch logs"}), 500

@app.route("/api/stats", methods=['GET'])
def get_stats():
    try:
        with Session() as session:
            runs_by_status = dict(
                session.query(ExperimentRun.status, func.count(ExperimentRun.id))
                .group_by(ExperimentRun.status)
                .all()
            )
            failed_drops = session.query(DropResult).filter(DropResult.status != 'ok').count()
            best = session.query(ExperimentRun.label, func.avg(DropResult.mean_throughput_mbps))\
                .join(DropResult, DropResult.run_id == ExperimentRun.id)\
                .filter(DropResult.mean_throughput_mbps.isnot(None))\
                .group_by(ExperimentRun.label)\
                .order_by(func.avg(DropResult.mean_throughput_mbps).desc())\
                .first()

            return jsonify({
                "totalRuns": sum(runs_by_status.values()),
                "completedRuns": runs_by_status.get('completed', 0),
                "failedRuns": runs_by_status.get('failed', 0),
                "failedDrops": failed_drops,
                "bestThroughputLabel": best[0] if best else None,
                "bestMeanThroughputMbps": float(best[1]) if best else None
            })
    except Exception as e:
        logger.error(f"Error fetching stats: {str(e)}")
        return jsonify({"error": "Failed to fetch stats"}), 500


if __name__ == "__main__":
    app.run(host="0.0.0.0", port=int(os.environ.get("PORT", 5000)))
