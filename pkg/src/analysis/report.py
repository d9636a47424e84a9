"""Metric tables written by ``waltz analyze``."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Dict, List

import pandas as pd

from analysis.ingest import OVERALL_BLOCK
from analysis.likert import likert_summary, pre_post_summary
from analysis.votes import block_votes, order_vote_counts, preference_scores, weighted_best_worst
from pipeline.log import TrialLog, trial_summary

logger = logging.getLogger(__name__)


def block_weights(table: pd.DataFrame) -> Dict[str, pd.DataFrame]:
    blocks = [b for b in table["block"].drop_duplicates() if b != OVERALL_BLOCK]
    return {block: weighted_best_worst(table, block) for block in blocks}


def questionnaire_report(
    table: pd.DataFrame, output_dir: str | Path, pre_post: pd.DataFrame | None = None
) -> Dict[str, str]:
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    paths: Dict[str, str] = {}

    def save(name: str, frame: pd.DataFrame) -> None:
        path = output_dir / f"{name}.csv"
        frame.to_csv(path, index=False)
        paths[name] = str(path)
        logger.info("Saved %s: %s", name, path)

    save("preference", preference_scores(table))
    weights = block_weights(table)
    if weights:
        save("block_weights", pd.concat([w.assign(block=b) for b, w in weights.items()], ignore_index=True))
    if (table["block"] == OVERALL_BLOCK).any():
        save("overall_weights", block_votes(table))
    save("order_votes", order_vote_counts(table))

    summary = likert_summary(table)
    save("likert_trials", summary.per_trial)
    save("likert_order", summary.per_order)
    if summary.warnings:
        path = output_dir / "warnings.txt"
        path.write_text("\n".join(summary.warnings) + "\n", encoding="utf-8")
        paths["warnings"] = str(path)

    if pre_post is not None:
        path = output_dir / "pre_post.json"
        path.write_text(json.dumps(pre_post_summary(pre_post), indent=2), encoding="utf-8")
        paths["pre_post"] = str(path)
        logger.info("Saved pre/post comfort: %s", path)
    return paths


def trial_report(logs: List[TrialLog], output_dir: str | Path) -> str:
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    path = output_dir / "trial_summary.csv"
    pd.DataFrame([trial_summary(log) for log in logs]).to_csv(path, index=False)
    logger.info("Saved trial summary for %d logs: %s", len(logs), path)
    return str(path)
