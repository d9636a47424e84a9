"""Randomized trial blocks.

Trial order inside a block is a seeded permutation. Trials are independent,
so they run on a thread pool; results are put back in the realized order
whatever order they finish in.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Sequence

import numpy as np
from rich.progress import Progress

from kinematics.chain import KinematicModel
from models.config import ProtocolConfig, TrialConfig
from models.errors import ContractViolation, TrialError
from pipeline.config import settings
from pipeline.log import TrialLog, log_stem, write_trial_log
from pipeline.simulate import run_trial

logger = logging.getLogger(__name__)


@dataclass
class BlockResult:
    index: int
    seed: int
    order: List[str]
    logs: List[TrialLog]

    def __iter__(self) -> Iterator[TrialLog]:
        return iter(self.logs)

    def __len__(self) -> int:
        return len(self.logs)

    def __getitem__(self, position: int) -> TrialLog:
        return self.logs[position]

    def manifest(self) -> Dict[str, object]:
        return {
            "block": self.index,
            "seed": self.seed,
            "order": self.order,
            "files": [log_stem(label) for label in self.order],
        }


def block_order(count: int, seed: int, block_index: int = 1) -> List[int]:
    rng = np.random.default_rng([seed, block_index])
    return [int(i) for i in rng.permutation(count)]


def run_block(
    configs: Sequence[TrialConfig],
    seed: int,
    block_index: int = 1,
    max_workers: int | None = None,
    model: KinematicModel | None = None,
    progress: bool = True,
) -> BlockResult:
    if not configs:
        raise ContractViolation("run_block needs at least one trial")
    order = block_order(len(configs), seed, block_index)
    realized = [configs[i] for i in order]
    labels = [c.name for c in realized]
    logger.info("Block %d order: %s", block_index, ", ".join(labels))

    logs: List[TrialLog | None] = [None] * len(realized)
    workers = max_workers or settings.max_workers
    with Progress(disable=not progress) as bar:
        task = bar.add_task(f"Block {block_index}", total=len(realized))
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(run_trial, config, model): pos for pos, config in enumerate(realized)}
            for future in as_completed(futures):
                pos = futures[future]
                try:
                    logs[pos] = future.result()
                except Exception as exc:
                    raise TrialError(labels[pos], pos, exc) from exc
                bar.advance(task)

    return BlockResult(index=block_index, seed=seed, order=labels, logs=[log for log in logs if log is not None])


def run_protocol(
    protocol: ProtocolConfig,
    seed: int,
    max_workers: int | None = None,
    model: KinematicModel | None = None,
    progress: bool = True,
) -> List[BlockResult]:
    """All blocks in their fixed order, trials shuffled within each block."""
    return [
        run_block(configs, seed, block_index=i, max_workers=max_workers, model=model, progress=progress)
        for i, configs in enumerate(protocol.trial_configs(), start=1)
    ]


def write_block(result: BlockResult, output_dir: str | Path) -> Path:
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    for log in result.logs:
        write_trial_log(log, output_dir)
    manifest_path = output_dir / f"block{result.index}.manifest.json"
    with open(manifest_path, "w", encoding="utf-8") as f:
        json.dump(result.manifest(), f, indent=2)
    logger.info("Saved block manifest: %s", manifest_path)
    return manifest_path
