import pytest

from packages.core.config import load_engine_settings
from packages.core.equivalence.checks import EquivalenceConfig


def test_load_engine_settings_missing(tmp_path, monkeypatch):
    monkeypatch.setenv("METAMODEL_CONFIG_PATH", str(tmp_path / "missing.json"))
    monkeypatch.delenv("METAMODEL_WORKERS", raising=False)
    monkeypatch.delenv("METAMODEL_ENUMERATION_CAP", raising=False)
    settings = load_engine_settings()
    assert settings.enumeration_cap == 2 ** 20
    assert settings.sample_budget == 1000
    assert settings.workers == 1


def test_load_engine_settings_file_and_env(tmp_path, monkeypatch):
    config_path = tmp_path / "metamodel.json"
    config_path.write_text('{"sample_budget": 64, "tolerance": 1e-6}')
    monkeypatch.setenv("METAMODEL_WORKERS", "3")
    monkeypatch.delenv("METAMODEL_ENUMERATION_CAP", raising=False)
    settings = load_engine_settings(str(config_path))
    assert settings.sample_budget == 64
    assert settings.tolerance == 1e-6
    assert settings.workers == 3
    cfg = EquivalenceConfig.from_settings(settings, seed=5)
    assert (cfg.sample_budget, cfg.seed, cfg.workers) == (64, 5, 3)


def test_load_engine_settings_rejects_bad_values(tmp_path):
    config_path = tmp_path / "metamodel.json"
    config_path.write_text('{"workers": 0}')
    with pytest.raises(ValueError):
        load_engine_settings(str(config_path))
