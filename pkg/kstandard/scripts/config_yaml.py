#!/usr/bin/env python3
"""
Module for handling configuration in YAML format.

"""

import os
from dataclasses import asdict, dataclass, replace
from typing import Optional, Tuple

import yaml

from .exactlin import MAX_PRIME, is_prime
from .verify import SUITES

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                                   "config", "kstandard_config.yaml")

DEFAULT_SUITES = SUITES


@dataclass(frozen=True)
class RunConfig:
    """Merged run settings: defaults <- YAML <- command-line flags."""

    r: int = 1
    N: int = 2
    prime: int = 32003
    window: Tuple[int, int] = (-2, 2)
    format: str = "table"
    cache_dir: Optional[str] = None
    seed: int = 0
    samples: int = 64
    enumeration_cap: int = 4096
    spanning_margin: int = 1
    almost_vanishing_margin: int = 1
    relation_max_chain: int = 4
    workers: int = 1
    scalars: Tuple[int, ...] = (1, 2, 3)
    suites: Tuple[str, ...] = DEFAULT_SUITES
    progress: bool = False
    schema_version: str = "kstandard/1"
    log_file: Optional[str] = None
    log_level: str = "INFO"

    def canonical(self) -> dict:
        """The settings that change results; used in cache keys."""
        return {
            "r": self.r,
            "N": self.N,
            "p": self.prime,
            "window": list(self.window),
            "seed": self.seed,
            "samples": self.samples,
            "enumeration_cap": self.enumeration_cap,
            "spanning_margin": self.spanning_margin,
            "almost_vanishing_margin": self.almost_vanishing_margin,
            "relation_max_chain": self.relation_max_chain,
            "scalars": list(self.scalars),
        }

    def with_overrides(self, **overrides) -> "RunConfig":
        """Apply the flags that were actually given (None means not given)."""
        given = {k: v for k, v in overrides.items() if v is not None}
        if "window" in given:
            given["window"] = tuple(given["window"])
        if "scalars" in given:
            given["scalars"] = tuple(given["scalars"])
        if "suites" in given:
            given["suites"] = tuple(given["suites"])
        return validate_run_config(replace(self, **given))


def validate_run_config(cfg: RunConfig) -> RunConfig:
    """Semantic checks shared by the YAML and command-line paths."""
    if not 1 <= cfg.r <= cfg.N:
        raise ValueError(f"✗ Error: need 1 ≤ r ≤ N, got r={cfg.r}, N={cfg.N}")
    if len(cfg.window) != 2 or cfg.window[0] > cfg.window[1]:
        raise ValueError(f"✗ Error: window must be [lo, hi] with lo ≤ hi, got {list(cfg.window)}")
    if not is_prime(cfg.prime) or cfg.prime >= MAX_PRIME:
        raise ValueError(f"✗ Error: prime must be a prime below 2**31, got {cfg.prime}")
    if cfg.format not in ("json", "table"):
        raise ValueError(f"✗ Error: format must be 'json' or 'table', got {cfg.format!r}")
    for name in ("samples", "enumeration_cap", "relation_max_chain", "workers"):
        if getattr(cfg, name) < 1:
            raise ValueError(f"✗ Error: '{name}' must be positive, got {getattr(cfg, name)}")
    for name in ("spanning_margin", "almost_vanishing_margin"):
        if getattr(cfg, name) < 0:
            raise ValueError(f"✗ Error: '{name}' must be non-negative, got {getattr(cfg, name)}")
    return cfg


class ConfigYAML:
    def __init__(self, config_path: str = DEFAULT_CONFIG_PATH):
        self.config_path = config_path
        self.config = self.get_config()
        self.constants = self.get_constants()
        self.run_settings = self.get_run_settings()

    def get_config(self) -> dict:
        """Load configuration from YAML file."""
        try:
            with open(self.config_path, "r") as f:
                config = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as e:
            raise ValueError(f"✗ Error: failed to load configuration {self.config_path}: {e}") from e
        if not isinstance(config, dict):
            raise ValueError(f"✗ Error: configuration {self.config_path} is not a mapping")
        return config

    def get_constants(self) -> dict:
        """Get constants from configuration."""
        if "constants" not in self.config:
            raise ValueError("✗ Error: No 'constants' section found in configuration")
        return self.config["constants"] or {}

    def get_run_settings(self) -> dict:
        """Get run settings from configuration."""
        if "run_settings" not in self.config:
            raise ValueError("✗ Error: No 'run_settings' section found in configuration")
        return self.config["run_settings"] or {}

    def validate_constants(self):
        """Validate constants in configuration."""
        required_constants = {
            "schema_version": str,
            "default_prime": int,
            "log_level": str,
        }
        for const, kind in required_constants.items():
            if const not in self.constants:
                raise ValueError(f"✗ Error: Missing required constant '{const}' in configuration")
            if not isinstance(self.constants[const], kind):
                raise ValueError(f"✗ Error: constant '{const}' must be {kind.__name__}")

    def validate_run_settings(self):
        """Validate run settings parameters."""
        required_params = {
            "r": (int, "Number of projective-injective vertices"),
            "N": (int, "Number of vertices"),
            "window": (list, "Degree window [lo, hi]"),
        }
        optional_params = {
            "prime": int,
            "format": str,
            "seed": int,
            "samples": int,
            "enumeration_cap": int,
            "spanning_margin": int,
            "almost_vanishing_margin": int,
            "relation_max_chain": int,
            "workers": int,
            "scalars": list,
            "suites": list,
        }
        for param, (kind, description) in required_params.items():
            if param not in self.run_settings:
                raise ValueError(f"✗ Error: Missing required parameter '{param}' ({description}) in run_settings")
            if not isinstance(self.run_settings[param], kind):
                raise ValueError(f"✗ Error: parameter '{param}' ({description}) must be {kind.__name__}")
        for param, kind in optional_params.items():
            value = self.run_settings.get(param)
            if value is not None and (not isinstance(value, kind) or isinstance(value, bool)):
                raise ValueError(f"✗ Error: parameter '{param}' must be {kind.__name__}, got {value!r}")
        unknown = set(self.run_settings) - set(required_params) - set(optional_params) - {"cache_dir"}
        if unknown:
            raise ValueError(f"✗ Error: unknown run_settings keys {sorted(unknown)}")
        window = self.run_settings["window"]
        if len(window) != 2 or not all(isinstance(x, int) for x in window):
            raise ValueError(f"✗ Error: 'window' must be two integers, got {window!r}")
        bad = [s for s in self.run_settings.get("suites") or () if s not in SUITES]
        if bad:
            raise ValueError(f"✗ Error: unknown suites {bad} in run_settings")

    def validate_configuration(self):
        """Validate entire configuration."""
        self.validate_constants()
        self.validate_run_settings()

    def run_config(self) -> RunConfig:
        self.validate_configuration()
        settings = dict(self.run_settings)
        base = RunConfig(
            prime=settings.pop("prime", self.constants["default_prime"]),
            schema_version=self.constants["schema_version"],
            log_file=self.constants.get("log_file"),
            log_level=self.constants["log_level"],
        )
        return base.with_overrides(**settings)


def load_run_config(config_path: Optional[str] = None) -> RunConfig:
    """RunConfig from a YAML file; built-in defaults when no file is given."""
    if config_path is None:
        return validate_run_config(RunConfig())
    return ConfigYAML(config_path).run_config()


def describe(cfg: RunConfig) -> dict:
    return asdict(cfg)
