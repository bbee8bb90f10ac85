import logging
import os
import sys
from pathlib import Path

from dotenv import load_dotenv

# Load .env from project root
_project_root = Path(__file__).resolve().parent.parent.parent
load_dotenv(_project_root / ".env")

CONFIG_ERROR_EXIT = 2

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _validate_env() -> None:
    bad = []
    for var in ("BBM_THREADS", "BBM_MASTER_SEED"):
        value = os.getenv(var)
        if value is not None and not value.strip().isdigit():
            bad.append(var)
    if os.getenv("BBM_THREADS", "1").strip() == "0":
        bad.append("BBM_THREADS")
    if os.getenv("BBM_LOG_LEVEL", "INFO").upper() not in LOG_LEVELS:
        bad.append("BBM_LOG_LEVEL")
    if bad:
        print(
            f"FATAL: Malformed environment variables: {', '.join(bad)}",
            file=sys.stderr,
        )
        sys.exit(CONFIG_ERROR_EXIT)


_validate_env()

OUTPUT_DIR: Path = Path(os.getenv("BBM_OUTPUT_DIR", "runs")).resolve()
DATABASE_URL: str = (
    os.getenv("BBM_DATABASE_URL") or f"sqlite:///{OUTPUT_DIR / 'runs.db'}"
)
THREADS: int = int(os.getenv("BBM_THREADS", "1"))
MASTER_SEED: int = int(os.getenv("BBM_MASTER_SEED", "20240601"))
LOG_LEVEL: int = getattr(logging, os.getenv("BBM_LOG_LEVEL", "INFO").upper())
ENVIRONMENT: str = os.getenv("ENVIRONMENT", "development")
