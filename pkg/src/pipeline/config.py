from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

from pipeline.paths import DEFAULT_MODEL_PATH, OUTPUT_DIR, ROOT_DIR

load_dotenv(ROOT_DIR / ".env")

_LOG_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR"}
_DEFAULT_WORKERS = 4


def worker_count(value: str | int | None) -> int:
    """Thread count from an env string or int; unparsable values give the default, floor 1."""
    try:
        workers = int(value) if value is not None else _DEFAULT_WORKERS
    except (TypeError, ValueError):
        workers = _DEFAULT_WORKERS
    return max(1, workers)


@dataclass(frozen=True)
class Settings:
    output_dir: Path = Path(os.getenv("WALTZ_OUTPUT_DIR", OUTPUT_DIR))
    log_level: str = os.getenv("WALTZ_LOG_LEVEL", "INFO")
    max_workers: int = worker_count(os.getenv("WALTZ_MAX_WORKERS"))
    model_path: Path = Path(os.getenv("WALTZ_MODEL_PATH", DEFAULT_MODEL_PATH))

    def __post_init__(self) -> None:
        level = (self.log_level or "INFO").upper()
        if level not in _LOG_LEVELS:
            level = "INFO"
        object.__setattr__(self, "log_level", level)

        object.__setattr__(self, "max_workers", worker_count(self.max_workers))

    @property
    def logging_level(self) -> int:
        return getattr(logging, self.log_level)


settings = Settings()
