import os
import sys

import pytest

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import cache_utils  # noqa: E402


@pytest.fixture(autouse=True)
def isolated_cache(tmp_path, monkeypatch):
    """Every test gets its own cache directory and a quiet console."""
    monkeypatch.setenv("STABLAB_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setenv("STABLAB_QUIET", "true")
    cache_utils.reset_cache()
    yield
    cache_utils.reset_cache()


@pytest.fixture
def rng():
    import numpy as np
    return np.random.default_rng(20240611)
