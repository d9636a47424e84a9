from __future__ import annotations

import logging
from functools import lru_cache
from pathlib import Path

from kinematics.chain import KinematicModel, build_model
from models.config import load_model_config

logger = logging.getLogger(__name__)


def load_model(path: str | Path) -> KinematicModel:
    model = build_model(load_model_config(path))
    logger.info("Loaded %d-joint model from %s (hands: %s)", model.dof, path, ", ".join(model.hands))
    return model


@lru_cache(maxsize=None)
def _cached(path: Path) -> KinematicModel:
    return load_model(path)


def default_model(path: str | Path | None = None) -> KinematicModel:
    """Shipped REEM-C-scale geometry, or the file named by ``WALTZ_MODEL_PATH``."""
    if path is None:
        from pipeline.config import settings

        path = settings.model_path
    return _cached(Path(path).resolve())
