"""Likert aggregation for confidence ("how well did you know what step to take?")
and comfort ("how comfortable did you feel during the dance?").

Standard deviations divide by n. Cells without a single response are left
out and reported as warnings.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, List

import pandas as pd

from analysis.ingest import trial_rows

logger = logging.getLogger(__name__)

MEASURES = ("confidence", "comfort")
SUMMARY_COLUMNS = ["measure", "mean", "std", "n"]


@dataclass
class LikertSummary:
    per_trial: pd.DataFrame
    per_order: pd.DataFrame
    warnings: List[str] = field(default_factory=list)


def _describe(values: pd.Series) -> dict:
    values = values.dropna().astype(float)
    return {"mean": float(values.mean()), "std": float(values.std(ddof=0)), "n": int(values.size)}


def likert_summary(table: pd.DataFrame, trials: Iterable[str] | None = None) -> LikertSummary:
    rows = trial_rows(table)
    labels = list(trials) if trials is not None else list(rows["trial"].drop_duplicates())
    warnings: List[str] = []

    def warn(message: str) -> None:
        logger.warning(message)
        warnings.append(message)

    per_trial = []
    for trial in labels:
        selected = rows[rows["trial"] == trial]
        for measure in MEASURES:
            if selected[measure].notna().sum() == 0:
                warn(f"No {measure} responses for trial {trial}")
                continue
            per_trial.append({"trial": trial, "measure": measure, **_describe(selected[measure])})

    per_order = []
    ordered = rows[rows["order"].notna()]
    for position in sorted(ordered["order"].unique()):
        selected = ordered[ordered["order"] == position]
        for measure in MEASURES:
            if selected[measure].notna().sum() == 0:
                warn(f"No {measure} responses at trial position {position}")
                continue
            per_order.append({"order": int(position), "measure": measure, **_describe(selected[measure])})

    return LikertSummary(
        per_trial=pd.DataFrame(per_trial, columns=["trial", *SUMMARY_COLUMNS]),
        per_order=pd.DataFrame(per_order, columns=["order", *SUMMARY_COLUMNS]),
        warnings=warnings,
    )


def pre_post_summary(table: pd.DataFrame) -> dict:
    """Comfort before vs after the session, plus how many participants got less comfortable."""
    paired = table.dropna(subset=["pre", "post"])
    return {
        "pre_mean": float(table["pre"].dropna().astype(float).mean()),
        "pre_std": float(table["pre"].dropna().astype(float).std(ddof=0)),
        "post_mean": float(table["post"].dropna().astype(float).mean()),
        "post_std": float(table["post"].dropna().astype(float).std(ddof=0)),
        "participants": int(len(table)),
        "decreased": int((paired["post"] < paired["pre"]).sum()),
    }
