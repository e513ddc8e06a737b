"""Service configuration with layered precedence.

CLI flags override environment variables (prefix VOCP_), which override
the optional JSON config file, which overrides built-in defaults.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

from .conversation import TurnConfig
from .errors import BadConfig

ENV_PREFIX = "VOCP_"

BACKENDS = ("extractive", "external")


@dataclass
class ServiceConfig:
    data_dir: Path = Path("vocp-data")
    tau_cluster: float = 0.5
    tau_evidence: float = 0.35
    tau_ground: float = 0.55
    n_min: int = 3
    k: int = 8
    min_cluster_size: int = 5
    min_evidence: int = 5
    backend: str = "extractive"
    backend_endpoint: str | None = None
    listen: str = "127.0.0.1:8841"

    def validate(self) -> "ServiceConfig":
        if not 0.0 < self.tau_cluster < 1.0:
            raise BadConfig(f"tau_cluster must be in (0, 1), got {self.tau_cluster}")
        for name in ("tau_evidence", "tau_ground"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise BadConfig(f"{name} must be in [0, 1], got {value}")
        for name in ("n_min", "k", "min_cluster_size"):
            if getattr(self, name) < 1:
                raise BadConfig(f"{name} must be at least 1")
        if self.min_evidence < 0:
            raise BadConfig("min_evidence must be non-negative")
        if self.backend not in BACKENDS:
            raise BadConfig(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        if self.backend == "external" and not self.backend_endpoint:
            raise BadConfig("external backend requires backend_endpoint")
        return self

    def turn_config(self) -> TurnConfig:
        return TurnConfig(k=self.k, tau_evidence=self.tau_evidence,
                          n_min=self.n_min, tau_ground=self.tau_ground)


_FIELD_TYPES = {f.name: f.type for f in fields(ServiceConfig)}


def _coerce(name: str, raw: Any) -> Any:
    kind = _FIELD_TYPES[name]
    if raw is None:
        return None
    if kind == "Path":
        return Path(raw)
    if kind == "float":
        return float(raw)
    if kind == "int":
        return int(raw)
    return str(raw)


def load_config(
    overrides: Mapping[str, Any] | None = None,
    env: Mapping[str, str] | None = None,
    config_file: Path | str | None = None,
) -> ServiceConfig:
    """Assemble configuration: overrides > environment > file > defaults."""
    env = os.environ if env is None else env
    merged: dict[str, Any] = {}
    if config_file:
        path = Path(config_file)
        if not path.exists():
            raise BadConfig(f"config file not found: {path}")
        try:
            loaded = json.loads(path.read_text())
        except ValueError as exc:
            raise BadConfig(f"config file {path} is not valid JSON: {exc}") from None
        unknown = set(loaded) - set(_FIELD_TYPES)
        if unknown:
            raise BadConfig(f"unknown config keys: {sorted(unknown)}")
        merged.update(loaded)
    for name in _FIELD_TYPES:
        env_key = ENV_PREFIX + name.upper()
        if env_key in env:
            merged[name] = env[env_key]
    if overrides:
        merged.update({k: v for k, v in overrides.items() if v is not None})
    try:
        coerced = {name: _coerce(name, value) for name, value in merged.items()}
    except (TypeError, ValueError) as exc:
        raise BadConfig(f"bad config value: {exc}") from None
    return ServiceConfig(**coerced).validate()
