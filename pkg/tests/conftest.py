import numpy as np
import pytest

from tools.trace import enable_tracing


@pytest.fixture(autouse=True)
def quiet_tracing():
    enable_tracing(False)
    yield
    enable_tracing(None)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def report_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("MACAULAY_REPORT_DIR", str(tmp_path))
    return tmp_path
