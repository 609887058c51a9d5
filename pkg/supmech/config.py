"""Configuration loading and validation for supmech runs."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Optional

import yaml

from .errors import ConfigError

TOLERANCE_ENV = "SUPMECH_TOLERANCE"


# ---------------------------------------------------------------------------
# Section dataclasses
# ---------------------------------------------------------------------------

@dataclass
class NumericsConfig:
    tolerance: float = 1e-10            # norm-based element equality
    rank_threshold: float = 1e-8        # relative singular-value cutoff
    lambda_relative_tolerance: float = 1e-8


@dataclass
class CalculusConfig:
    max_vector_field_degree: int = 6
    leibniz_random_pairs: int = 20
    leibniz_min_pairs: int = 50


@dataclass
class PhysicsConfig:
    hbar: float = 1.0


@dataclass
class EvolutionSettings:
    t_end: float = 10.0
    dt: float = 1e-3
    method: str = "rk4"                 # rk4 | exact
    error_check_every: int = 1000
    max_local_error: float = 1e-6
    record_every: int = 1


@dataclass
class SuitesConfig:
    trials: int = 100
    seed: int = 20240611
    lambda_samples: int = 50


# ---------------------------------------------------------------------------
# Output config
# ---------------------------------------------------------------------------

@dataclass
class OutputConfig:
    directory: str = "supmech-out"
    formats: list = field(default_factory=lambda: ["json", "text"])


# ---------------------------------------------------------------------------
# Top-level Config
# ---------------------------------------------------------------------------

@dataclass
class SupmechConfig:
    version: str = "1.0"
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    calculus: CalculusConfig = field(default_factory=CalculusConfig)
    physics: PhysicsConfig = field(default_factory=PhysicsConfig)
    evolution: EvolutionSettings = field(default_factory=EvolutionSettings)
    suites: SuitesConfig = field(default_factory=SuitesConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def validate(self) -> None:
        if self.numerics.tolerance <= 0:
            raise ConfigError(f"numerics.tolerance must be positive, got {self.numerics.tolerance}")
        if self.physics.hbar <= 0:
            raise ConfigError(f"physics.hbar must be positive, got {self.physics.hbar}")
        if self.evolution.dt <= 0:
            raise ConfigError(f"evolution.dt must be positive, got {self.evolution.dt}")
        if self.evolution.method not in ("rk4", "exact"):
            raise ConfigError(f"evolution.method must be rk4 or exact, got {self.evolution.method!r}")
        if self.suites.trials < 1:
            raise ConfigError(f"suites.trials must be at least 1, got {self.suites.trials}")
        unknown = [f for f in self.output.formats if f not in ("json", "text")]
        if unknown:
            raise ConfigError(f"unknown output formats: {', '.join(unknown)}")


# ---------------------------------------------------------------------------
# Loader
# ---------------------------------------------------------------------------

def _apply_dict(obj, data: dict):
    """Apply dictionary values to a dataclass instance, recursively."""
    if not isinstance(data, dict):
        return
    for key, value in data.items():
        if hasattr(obj, key):
            current = getattr(obj, key)
            if hasattr(current, '__dataclass_fields__') and isinstance(value, dict):
                _apply_dict(current, value)
            else:
                setattr(obj, key, value)


def load_config(config_path: Optional[str] = None, root: Optional[str] = None) -> SupmechConfig:
    """Load supmech configuration from YAML, then apply the environment.

    Search order when *config_path* is None:
      1. ``supmech.yaml`` in *root*
      2. ``config/supmech.yaml`` in *root*

    *root* defaults to cwd.  ``SUPMECH_TOLERANCE`` overrides
    ``numerics.tolerance`` after the file is read.
    """
    if root is None:
        root = os.getcwd()

    config = SupmechConfig()

    if config_path is None:
        candidates = [
            os.path.join(root, "supmech.yaml"),
            os.path.join(root, "config", "supmech.yaml"),
        ]
        for candidate in candidates:
            if os.path.isfile(candidate):
                config_path = candidate
                break
    elif not os.path.isfile(config_path):
        raise ConfigError(f"config file not found: {config_path}", {"path": config_path})

    if config_path:
        try:
            with open(config_path, "r", encoding="utf-8") as fh:
                data = yaml.safe_load(fh) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {config_path}: {exc}", {"path": config_path}) from exc
        if not isinstance(data, dict):
            raise ConfigError(f"{config_path} must contain a mapping", {"path": config_path})
        if "version" in data:
            config.version = str(data["version"])
        for section in ("numerics", "calculus", "physics", "evolution", "suites", "output"):
            if section in data:
                _apply_dict(getattr(config, section), data[section])

    override = os.environ.get(TOLERANCE_ENV)
    if override:
        try:
            config.numerics.tolerance = float(override)
        except ValueError as exc:
            raise ConfigError(f"{TOLERANCE_ENV}={override!r} is not a number", {"value": override}) from exc

    config.validate()
    return config
