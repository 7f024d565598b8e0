"""Runtime configuration read from ``config/workbench.json``."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any

from .ore_core import DEFAULT_REWRITE_BUDGET

log = logging.getLogger(__name__)

CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "workbench.json"
BUDGET_ENV = "HOPFORE_REWRITE_BUDGET"


@dataclass(frozen=True)
class WorkbenchConfig:
    rewrite_budget: int = DEFAULT_REWRITE_BUDGET
    default_seed: int = 0
    property_samples: int = 25
    default_max_deg: int = 3
    default_max_m: int = 10
    log_level: str = "WARNING"


def _coerce(name: str, value: Any, default: Any) -> Any:
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError(f"config key {name} must be an integer, got {value!r}")
        return value
    return str(value).upper() if name == "log_level" else str(value)


def load_config(path: str | Path | None = None) -> WorkbenchConfig:
    """Read the configuration file, falling back to defaults for anything missing."""
    config_path = Path(path) if path is not None else CONFIG_PATH
    config = WorkbenchConfig()
    if config_path.exists():
        raw = json.loads(config_path.read_text("utf-8"))
        known = {f.name: getattr(config, f.name) for f in fields(WorkbenchConfig)}
        changes: dict[str, Any] = {}
        for key, value in raw.items():
            if key.startswith("$comment"):
                continue
            if key not in known:
                log.warning("Ignoring unknown config key %s in %s", key, config_path)
                continue
            changes[key] = _coerce(key, value, known[key])
        config = replace(config, **changes)
    elif path is not None:
        raise FileNotFoundError(f"config file not found: {config_path}")
    else:
        log.debug("No config at %s, using defaults", config_path)

    override = os.environ.get(BUDGET_ENV)
    if override:
        try:
            config = replace(config, rewrite_budget=int(override))
        except ValueError:
            log.warning("Ignoring %s=%r: not an integer", BUDGET_ENV, override)
    if config.rewrite_budget < 1:
        raise ValueError("rewrite_budget must be positive")
    return config
