from __future__ import annotations

import json
import os
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field


DEFAULT_CONFIG_PATH = "metamodel.json"


class EngineSettings(BaseModel):
    enumeration_cap: int = Field(default=2 ** 20, ge=1)
    sample_budget: int = Field(default=1000, ge=1)
    tolerance: float = Field(default=1e-9, ge=0)
    workers: int = Field(default=1, ge=1)
    exhaustive_limit: int = Field(default=256, ge=1)


def load_engine_settings(path: Optional[str] = None) -> EngineSettings:
    config_path = path or os.getenv("METAMODEL_CONFIG_PATH", DEFAULT_CONFIG_PATH)
    values: Dict[str, Any] = {}
    if os.path.exists(config_path):
        with open(config_path, "r", encoding="utf-8") as handle:
            values = json.load(handle)
    workers = os.getenv("METAMODEL_WORKERS")
    if workers:
        values["workers"] = int(workers)
    cap = os.getenv("METAMODEL_ENUMERATION_CAP")
    if cap:
        values["enumeration_cap"] = int(cap)
    return EngineSettings(**values)
