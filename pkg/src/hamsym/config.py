"""Run configuration: defaults, an optional JSON file named by ``HAMSYM_CONFIG``, then flags."""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError
from .hamilton import DEFAULT_NODE_LIMIT, DEFAULT_TIMEOUT
from .autiso import DEFAULT_LIMIT
from .perm import DEFAULT_SEED

ENV_VAR = "HAMSYM_CONFIG"
FORMATS = ("json", "csv", "text")


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    time_budget_ms: int = int(DEFAULT_TIMEOUT * 1000)
    node_budget: int = DEFAULT_NODE_LIMIT
    max_auto_vertices: int = DEFAULT_LIMIT
    allow_heavy: bool = False
    output_format: str = "json"
    census_dir: str | None = None
    groups_dir: str | None = None
    out_dir: str = "hamsym-out"

    def validate(self) -> "RunConfig":
        if not 0 <= self.seed < 1 << 64:
            raise ConfigError(f"seed {self.seed} is not a 64-bit value")
        for name in ("time_budget_ms", "node_budget", "max_auto_vertices"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.output_format not in FORMATS:
            raise ConfigError(f"output_format must be one of {', '.join(FORMATS)}")
        return self

    def ensure_out_dir(self) -> Path:
        out = Path(self.out_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"output directory {out} is not writable: {exc}") from None
        if not os.access(out, os.W_OK):
            raise ConfigError(f"output directory {out} is not writable")
        return out

    @property
    def time_limit(self) -> float:
        return self.time_budget_ms / 1000

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, doc: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(doc) - known
        if extra:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(extra))}")
        return cls(**doc).validate()


def load_config(overrides: dict | None = None, env: dict | None = None) -> RunConfig:
    """Defaults, then the file from ``HAMSYM_CONFIG``, then non-None ``overrides``."""
    env = os.environ if env is None else env
    cfg = RunConfig()
    path = env.get(ENV_VAR)
    if path:
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"{ENV_VAR}={path}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        if not isinstance(doc, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        cfg = RunConfig.from_json(doc)
    if overrides:
        cfg = replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
    return cfg.validate()
