import logging
import math
from collections.abc import Sequence
from pathlib import Path

from sqlalchemy import create_engine, select
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session

from app.config.settings import DATABASE_URL
from app.database.models import Base, CheckRecord, RunRecord

logger = logging.getLogger(__name__)

engine = create_engine(DATABASE_URL, echo=False)


def use_database(url: str) -> Engine:
    """Point the registry at another database (tests, --out directories)."""
    global engine
    engine = create_engine(url, echo=False)
    return engine


def init_db() -> None:
    url = engine.url
    on_disk = url.database not in (None, "", ":memory:")
    if url.get_backend_name() == "sqlite" and on_disk:
        Path(url.database).parent.mkdir(parents=True, exist_ok=True)
    Base.metadata.create_all(engine)
    logger.info("Run registry schema initialized.")


def save_run(
    kind: str,
    config_hash: str,
    master_seed: int,
    tool_version: str,
    output_dir: str,
    status: str,
) -> RunRecord:
    with Session(engine) as session:
        run = RunRecord(
            kind=kind,
            config_hash=config_hash,
            master_seed=str(master_seed),
            tool_version=tool_version,
            output_dir=output_dir,
            status=status,
        )
        session.add(run)
        session.commit()
        session.refresh(run)
        session.expunge(run)
        logger.info("Saved run id=%s kind=%s status=%s", run.id, kind, status)
        return run


def _finite(value: float | None) -> float | None:
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def save_check(
    run_id: int,
    name: str,
    claim: str,
    passed: bool,
    observed: float | None = None,
    threshold: float | None = None,
) -> CheckRecord:
    with Session(engine) as session:
        check = CheckRecord(
            run_id=run_id,
            name=name,
            claim=claim,
            observed=_finite(observed),
            threshold=_finite(threshold),
            passed=bool(passed),
        )
        session.add(check)
        session.commit()
        session.refresh(check)
        session.expunge(check)
        return check


def list_runs_by_kind(kind: str | None = None) -> Sequence[RunRecord]:
    with Session(engine) as session:
        stmt = select(RunRecord).order_by(RunRecord.id.desc())
        if kind is not None:
            stmt = stmt.where(RunRecord.kind == kind)
        runs = list(session.scalars(stmt).all())
        session.expunge_all()
        return runs


def get_checks_for_run(run_id: int) -> Sequence[CheckRecord]:
    with Session(engine) as session:
        stmt = (
            select(CheckRecord)
            .where(CheckRecord.run_id == run_id)
            .order_by(CheckRecord.id)
        )
        checks = list(session.scalars(stmt).all())
        session.expunge_all()
        return checks


def find_runs_by_config_hash(config_hash: str) -> Sequence[RunRecord]:
    with Session(engine) as session:
        stmt = (
            select(RunRecord)
            .where(RunRecord.config_hash == config_hash)
            .order_by(RunRecord.id)
        )
        runs = list(session.scalars(stmt).all())
        session.expunge_all()
        return runs
