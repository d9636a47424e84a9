"""Best/worst vote metrics.

Preference score of a trial, on 1 (everyone picked it as worst) to 5
(everyone picked it as best):

    score = 3 + (2 / n_p) * sum_p s_p,   s_p = +1 best, -1 worst, 0 otherwise

n_p counts every participant in the table, abstainers included. Per-block
vote weights split one unit of "best" and one unit of "worst" per participant
evenly over the trials they selected.
"""

from __future__ import annotations

import logging
from typing import Iterable

import numpy as np
import pandas as pd

from analysis.ingest import OVERALL_BLOCK, trial_rows
from models.enums import Vote
from models.errors import InputError

logger = logging.getLogger(__name__)


def _participant_signs(rows: pd.DataFrame) -> pd.Series:
    best = (rows["vote"] == Vote.BEST.value).groupby(rows["participant"]).sum()
    worst = (rows["vote"] == Vote.WORST.value).groupby(rows["participant"]).sum()
    return (best - worst).clip(-1, 1)


def preference_metric(votes: pd.DataFrame, trial: str) -> float:
    rows = trial_rows(votes)
    n_p = votes["participant"].nunique()
    if n_p < 1:
        raise InputError("Preference metric needs at least one participant")
    if trial not in set(rows["trial"]):
        raise InputError(f"Unknown trial label {trial!r}")
    signs = _participant_signs(rows[rows["trial"] == trial])
    return 3.0 + 2.0 / n_p * float(signs.sum())


def preference_scores(votes: pd.DataFrame) -> pd.DataFrame:
    rows = trial_rows(votes)
    records = []
    for trial in rows["trial"].drop_duplicates():
        selected = rows[rows["trial"] == trial]
        records.append(
            {
                "trial": trial,
                "score": preference_metric(votes, trial),
                "best": int((selected["vote"] == Vote.BEST.value).sum()),
                "worst": int((selected["vote"] == Vote.WORST.value).sum()),
                "participants": int(votes["participant"].nunique()),
            }
        )
    return pd.DataFrame(records, columns=["trial", "score", "best", "worst", "participants"])


def vote_weights(rows: pd.DataFrame) -> pd.DataFrame:
    """Per-row best/worst weight: 1 / (selections of that kind by the participant in the block)."""
    out = rows.copy()
    for kind in (Vote.BEST, Vote.WORST):
        hit = (out["vote"] == kind.value).astype(float)
        count = hit.groupby([out["participant"], out["block"]]).transform("sum")
        out[f"{kind.value}_weight"] = np.where(count > 0, hit / count.where(count > 0, 1.0), 0.0)
    return out


def weighted_best_worst(votes: pd.DataFrame, block: str, trials: Iterable[str] | None = None) -> pd.DataFrame:
    rows = votes[votes["block"] == str(block)]
    known = list(trials) if trials is not None else list(rows["trial"].drop_duplicates())
    if rows.empty and trials is None:
        logger.warning("No votes recorded for block %s", block)
    weighted = vote_weights(rows)
    sums = weighted.groupby("trial")[["best_weight", "worst_weight"]].sum()
    table = sums.reindex(known, fill_value=0.0)
    table.index.name = "trial"
    return table.reset_index()


def block_votes(votes: pd.DataFrame) -> pd.DataFrame:
    """Weighted answers to the between-block best/worst question."""
    return weighted_best_worst(votes, OVERALL_BLOCK)


def order_vote_counts(votes: pd.DataFrame) -> pd.DataFrame:
    """Best/worst weight totals by within-block presentation position."""
    rows = trial_rows(votes)
    rows = rows[rows["order"].notna()]
    weighted = vote_weights(rows)
    sums = weighted.groupby("order")[["best_weight", "worst_weight"]].sum()
    sums.index = sums.index.astype(int)
    return sums.reset_index()
