import os
import sys

import pytest


REPO_ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if REPO_ROOT not in sys.path:
    sys.path.insert(0, REPO_ROOT)


@pytest.fixture(autouse=True)
def isolated_engine_settings(tmp_path, monkeypatch):
    """Keep a developer's metamodel.json and METAMODEL_* variables out of the tests."""
    monkeypatch.setenv("METAMODEL_CONFIG_PATH", str(tmp_path / "metamodel.json"))
    monkeypatch.delenv("METAMODEL_WORKERS", raising=False)
    monkeypatch.delenv("METAMODEL_ENUMERATION_CAP", raising=False)
    monkeypatch.delenv("METAMODEL_LOG_LEVELS", raising=False)
