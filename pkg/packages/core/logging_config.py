from __future__ import annotations

import logging
import logging.config
import os
import sys
from typing import Any, Dict, Optional


PACKAGE_LOGGERS = {
    "metamodel": "packages.core.metamodel",
    "ca": "packages.core.ca",
    "ann": "packages.core.ann",
    "adaptation": "packages.core.adaptation",
    "equivalence": "packages.core.equivalence",
    "cli": "apps.cli",
}
DESTINATIONS = ("stdout", "stderr", "file")


def _level(raw: str, source: str) -> str:
    level = raw.strip().upper()
    if not isinstance(logging.getLevelName(level), int):
        raise RuntimeError(f"unknown log level {raw!r} in {source}")
    return level


def package_levels(raw: Optional[str] = None) -> Dict[str, str]:
    """Parse ``METAMODEL_LOG_LEVELS``, e.g. ``adaptation=DEBUG,ann=INFO``."""
    raw = os.getenv("METAMODEL_LOG_LEVELS", "") if raw is None else raw
    levels: Dict[str, str] = {}
    for part in filter(None, (chunk.strip() for chunk in raw.split(","))):
        name, _, level = part.partition("=")
        if name not in PACKAGE_LOGGERS or not level:
            raise RuntimeError(f"bad METAMODEL_LOG_LEVELS entry {part!r}")
        levels[PACKAGE_LOGGERS[name]] = _level(level, "METAMODEL_LOG_LEVELS")
    return levels


def build_logging_config() -> Dict[str, Any]:
    root_level = _level(os.getenv("LOG_LEVEL", "WARNING"), "LOG_LEVEL")
    destination = os.getenv("LOG_DESTINATION", "stderr").lower()
    if destination not in DESTINATIONS:
        raise RuntimeError(f"LOG_DESTINATION must be one of {', '.join(DESTINATIONS)}, got {destination!r}")

    if destination == "file":
        log_file = os.getenv("LOG_FILE")
        if not log_file:
            raise RuntimeError("LOG_FILE is required when LOG_DESTINATION=file")
        handler: Dict[str, Any] = {"class": "logging.FileHandler", "filename": log_file}
    else:
        handler = {
            "class": "logging.StreamHandler",
            "stream": sys.stdout if destination == "stdout" else sys.stderr,
        }
    handler.update({"level": "DEBUG", "formatter": "standard"})

    return {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "standard": {
                "format": "%(asctime)s %(levelname)s %(name)s %(message)s",
            }
        },
        "handlers": {"default": handler},
        "loggers": {name: {"level": level} for name, level in package_levels().items()},
        "root": {"handlers": ["default"], "level": root_level},
    }


def configure_logging() -> None:
    logging.config.dictConfig(build_logging_config())
