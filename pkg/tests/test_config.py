from __future__ import annotations

import pytest

from supmech.config import TOLERANCE_ENV, SupmechConfig, load_config
from supmech.errors import ConfigError


def test_defaults(config) -> None:
    assert config.numerics.tolerance == 1e-10
    assert config.physics.hbar == 1.0
    assert config.suites.seed == 20240611
    assert config.output.formats == ["json", "text"]
    config.validate()


def test_yaml_file_is_found_in_root(tmp_path, monkeypatch) -> None:
    monkeypatch.delenv(TOLERANCE_ENV, raising=False)
    (tmp_path / "supmech.yaml").write_text(
        "physics:\n  hbar: 2.0\nsuites:\n  trials: 7\nevolution:\n  method: exact\n",
        encoding="utf-8",
    )
    config = load_config(root=str(tmp_path))
    assert config.physics.hbar == 2.0
    assert config.suites.trials == 7
    assert config.evolution.method == "exact"
    assert config.numerics.tolerance == 1e-10


def test_config_subdirectory(tmp_path, monkeypatch) -> None:
    monkeypatch.delenv(TOLERANCE_ENV, raising=False)
    (tmp_path / "config").mkdir()
    (tmp_path / "config" / "supmech.yaml").write_text("suites:\n  seed: 5\n", encoding="utf-8")
    assert load_config(root=str(tmp_path)).suites.seed == 5


def test_environment_overrides_tolerance(tmp_path, monkeypatch) -> None:
    (tmp_path / "supmech.yaml").write_text("numerics:\n  tolerance: 1.0e-8\n", encoding="utf-8")
    monkeypatch.setenv(TOLERANCE_ENV, "1e-6")
    assert load_config(root=str(tmp_path)).numerics.tolerance == 1e-6


def test_bad_environment_value(tmp_path, monkeypatch) -> None:
    monkeypatch.setenv(TOLERANCE_ENV, "tight")
    with pytest.raises(ConfigError):
        load_config(root=str(tmp_path))


def test_missing_explicit_file(tmp_path) -> None:
    with pytest.raises(ConfigError):
        load_config(config_path=str(tmp_path / "nope.yaml"))


def test_invalid_values_are_rejected(tmp_path, monkeypatch) -> None:
    monkeypatch.delenv(TOLERANCE_ENV, raising=False)
    (tmp_path / "supmech.yaml").write_text("physics:\n  hbar: -1\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(root=str(tmp_path))
    config = SupmechConfig()
    config.output.formats = ["pdf"]
    with pytest.raises(ConfigError):
        config.validate()
    config.output.formats = ["json", "csv"]
    with pytest.raises(ConfigError):
        config.validate()
