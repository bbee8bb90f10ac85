"""The single writer: every artifact file and registry row of a run."""

import json
import logging
import math
from collections.abc import Mapping
from pathlib import Path

import numpy as np

from app import __version__
from app.config.experiment import ExperimentConfig, config_hash
from app.database import repository
from app.experiments.results import ExperimentResult

logger = logging.getLogger(__name__)

SEED_SPLITTING = (
    "member i draws from SeedSequence(master_seed, spawn_key=(i,))"
    ".generate_state(1, uint64)[0]"
)


def _jsonable(value):
    """Plain JSON values; non-finite floats become the strings inf, -inf, nan."""
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isfinite(value):
            return value
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": _jsonable(value.real), "im": _jsonable(value.imag)}
    if value is None or isinstance(value, str):
        return value
    return str(value)


def run_directory(cfg: ExperimentConfig, digest: str | None = None) -> Path:
    digest = digest or config_hash(cfg)
    return Path(cfg.output_dir) / f"{cfg.kind}-{digest[:12]}"


def build_manifest(cfg: ExperimentConfig, result: ExperimentResult) -> dict:
    return _jsonable(
        {
            "kind": cfg.kind,
            "claim": result.claim,
            "status": "pass" if result.passed else "fail",
            "tool_version": __version__,
            "config_hash": config_hash(cfg),
            "master_seed": cfg.master_seed,
            "seed_splitting": SEED_SPLITTING,
            "member_seeds": result.member_seeds,
            "config": cfg.to_dict(),
            "checks": [check.as_dict() for check in result.checks],
            "summary": result.summary,
        }
    )


def render_summary(cfg: ExperimentConfig, result: ExperimentResult) -> str:
    lines = [
        f"experiment: {cfg.kind}",
        f"claim tested: {result.claim}",
        f"master seed: {cfg.master_seed}",
        f"result: {'PASS' if result.passed else 'FAIL'}",
        "",
    ]
    for check in result.checks:
        mark = "PASS" if check.passed else "FAIL"
        line = f"[{mark}] {check.name}: {check.claim}"
        if check.observed is not None:
            line += f" (observed {check.observed:.6g}"
            if check.threshold is not None:
                line += f", threshold {check.threshold:.6g}"
            line += ")"
        lines.append(line)
    return "\n".join(lines) + "\n"


def write_result(cfg: ExperimentConfig, result: ExperimentResult) -> Path:
    """data.csv (or data.json), manifest.json and summary.txt, then registry rows."""
    digest = config_hash(cfg)
    run_dir = run_directory(cfg, digest)
    run_dir.mkdir(parents=True, exist_ok=True)

    if cfg.fmt == "json":
        data_path = run_dir / "data.json"
        result.data.to_json(data_path, orient="records", indent=2, double_precision=15)
    else:
        data_path = run_dir / "data.csv"
        result.data.to_csv(data_path, index=False)
    manifest = build_manifest(cfg, result)
    (run_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2) + "\n", encoding="utf-8"
    )
    (run_dir / "summary.txt").write_text(render_summary(cfg, result), encoding="utf-8")
    logger.info("Wrote %s, manifest.json, summary.txt to %s", data_path.name, run_dir)

    repository.init_db()
    run = repository.save_run(
        kind=cfg.kind,
        config_hash=digest,
        master_seed=cfg.master_seed,
        tool_version=__version__,
        output_dir=str(run_dir),
        status=manifest["status"],
    )
    for check in result.checks:
        repository.save_check(
            run.id,
            check.name,
            check.claim,
            check.passed,
            check.observed,
            check.threshold,
        )
    logger.info("Registered run id=%s with %d checks", run.id, len(result.checks))
    return run_dir
