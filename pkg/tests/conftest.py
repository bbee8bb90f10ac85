import os
import tempfile

import numpy as np
import pytest

# Set test environment variables BEFORE any app imports
_scratch = tempfile.mkdtemp(prefix="bbm-lab-tests-")
os.environ.setdefault("BBM_OUTPUT_DIR", _scratch)
os.environ.setdefault("BBM_DATABASE_URL", f"sqlite:///{_scratch}/runs.db")
os.environ.setdefault("BBM_THREADS", "1")
os.environ.setdefault("ENVIRONMENT", "test")

from app.spectral.field import SpectralField  # noqa: E402
from app.spectral.products import decaying_random_field  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def smooth_field():
    return SpectralField.from_modes({0: 0.25, 1: 0.5, -1: 0.5, 2: 0.1j, -2: -0.1j}, 16)


@pytest.fixture
def rough_field(rng):
    return decaying_random_field(rng, 32, decay=1.0)


@pytest.fixture
def registry(tmp_path):
    """Point the run registry at a throwaway sqlite file."""
    import app.database.repository as repo

    original_engine = repo.engine
    engine = repo.use_database(f"sqlite:///{tmp_path / 'registry.db'}")
    repo.init_db()
    try:
        yield repo
    finally:
        repo.engine = original_engine
        engine.dispose()
