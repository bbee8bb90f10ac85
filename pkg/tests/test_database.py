import math

from sqlalchemy import create_engine
from sqlalchemy.orm import Session

from app.database.models import Base, CheckRecord, RunRecord


def test_run_record_model(tmp_path):
    db_path = tmp_path / "test.db"
    engine = create_engine(f"sqlite:///{db_path}")
    Base.metadata.create_all(engine)

    with Session(engine) as session:
        run = RunRecord(
            kind="tails",
            config_hash="a" * 64,
            master_seed=str(2**63 + 5),
            tool_version="0.1.0",
            output_dir="/tmp/runs/tails-aaaaaaaaaaaa",
            status="pass",
        )
        session.add(run)
        session.commit()
        session.refresh(run)

        assert run.id is not None
        assert run.created_at is not None
        assert int(run.master_seed) == 2**63 + 5


def test_record_reprs():
    run = RunRecord(id=1, kind="sharpness", status="fail")
    check = CheckRecord(id=2, name="variance slope", passed=True)
    assert "RunRecord" in repr(run)
    assert "sharpness" in repr(run)
    assert "variance slope" in repr(check)


def test_save_and_list_runs(registry):
    first = registry.save_run("tails", "h1", 1, "0.1.0", "/tmp/a", "pass")
    registry.save_run("sharpness", "h2", 2, "0.1.0", "/tmp/b", "fail")
    registry.save_run("tails", "h3", 3, "0.1.0", "/tmp/c", "pass")

    tails = registry.list_runs_by_kind("tails")
    assert [r.config_hash for r in tails] == ["h3", "h1"]
    assert len(registry.list_runs_by_kind()) == 3
    assert first.master_seed == "1"


def test_checks_belong_to_their_run(registry):
    run = registry.save_run("inflation", "h", 5, "0.1.0", "/tmp/x", "fail")
    registry.save_check(run.id, "amplification", "grows", False, 3.2, 10.0)
    registry.save_check(run.id, "no blow-up", "finite", True)

    checks = registry.get_checks_for_run(run.id)
    assert [c.name for c in checks] == ["amplification", "no blow-up"]
    assert checks[0].observed == 3.2
    assert checks[1].threshold is None
    assert registry.get_checks_for_run(run.id + 1) == []


def test_non_finite_values_are_stored_as_null(registry):
    run = registry.save_run("gwp-energy-trace", "h", 5, "0.1.0", "/tmp/y", "pass")
    check = registry.save_check(run.id, "crossing", "never", True, math.inf, math.nan)
    assert check.observed is None
    assert check.threshold is None


def test_find_runs_by_config_hash(registry):
    registry.save_run("tails", "same", 1, "0.1.0", "/tmp/1", "pass")
    registry.save_run("tails", "same", 1, "0.1.0", "/tmp/2", "pass")
    registry.save_run("tails", "other", 1, "0.1.0", "/tmp/3", "pass")
    assert [r.output_dir for r in registry.find_runs_by_config_hash("same")] == [
        "/tmp/1",
        "/tmp/2",
    ]
