"""Questionnaire CSV ingestion.

Rows are long format, one per participant x block x trial:

    participant,block,trial,vote,confidence,comfort,order

``block`` is the block name ("1", "2", "3") or "overall" for the
between-block question, where ``trial`` names a block ("block1"...).
``vote`` is best, worst or none (blank means none). ``confidence`` and
``comfort`` are 1-5 or blank. ``order`` is the 1-based position of the
trial within its block as it was presented.
"""

from __future__ import annotations

import logging
from pathlib import Path

import pandas as pd

from models.enums import Vote
from models.errors import InputError

logger = logging.getLogger(__name__)

QUESTIONNAIRE_COLUMNS = ["participant", "block", "trial", "vote", "confidence", "comfort", "order"]
PRE_POST_COLUMNS = ["participant", "pre", "post"]
OVERALL_BLOCK = "overall"
LIKERT_RANGE = (1, 5)


def _require_columns(df: pd.DataFrame, columns: list[str], source: str) -> None:
    missing = [c for c in columns if c not in df.columns]
    if missing:
        raise InputError(f"{source}: missing columns {missing}")


def _likert(series: pd.Series, name: str) -> pd.Series:
    values = pd.to_numeric(series, errors="coerce")
    bad = series.notna() & (series.astype(str).str.strip() != "") & values.isna()
    low, high = LIKERT_RANGE
    bad |= values.notna() & ((values < low) | (values > high) | (values != values.round()))
    if bad.any():
        raise InputError(f"{name}: values must be integers {low}-{high}, got {series[bad].tolist()}")
    return values.astype("Int64")


def normalize_questionnaire(df: pd.DataFrame, source: str = "questionnaire") -> pd.DataFrame:
    """Validate and type a questionnaire table (columns as in ``QUESTIONNAIRE_COLUMNS``)."""
    _require_columns(df, QUESTIONNAIRE_COLUMNS, source)
    out = df[QUESTIONNAIRE_COLUMNS].copy()
    out["participant"] = out["participant"].astype(str).str.strip()
    out["block"] = out["block"].astype(str).str.strip()
    out["trial"] = out["trial"].astype(str).str.strip()

    votes = out["vote"].fillna("").astype(str).str.strip().str.lower().replace("", Vote.NONE.value)
    unknown = ~votes.isin([v.value for v in Vote])
    if unknown.any():
        raise InputError(f"{source}: unknown vote values {sorted(set(votes[unknown]))}")
    out["vote"] = votes

    out["confidence"] = _likert(out["confidence"], f"{source} confidence")
    out["comfort"] = _likert(out["comfort"], f"{source} comfort")
    out["order"] = pd.to_numeric(out["order"], errors="coerce").astype("Int64")

    marked = out[out["vote"] != Vote.NONE.value]
    both = marked.groupby(["participant", "block", "trial"])["vote"].nunique()
    if (both > 1).any():
        clashes = [" / ".join(key) for key in both[both > 1].index]
        raise InputError(f"{source}: trial marked both best and worst in one block: {clashes}")
    return out


def read_questionnaire(path: str | Path) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise InputError(f"Missing questionnaire file: {path}")
    df = pd.read_csv(path, dtype={"participant": str, "block": str, "trial": str, "vote": str})
    table = normalize_questionnaire(df, source=path.name)
    logger.info(
        "Loaded %d questionnaire rows from %s (%d participants)", len(table), path, table["participant"].nunique()
    )
    return table


def read_pre_post(path: str | Path) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise InputError(f"Missing pre/post file: {path}")
    df = pd.read_csv(path, dtype={"participant": str})
    _require_columns(df, PRE_POST_COLUMNS, path.name)
    out = df[PRE_POST_COLUMNS].copy()
    out["pre"] = _likert(out["pre"], f"{path.name} pre")
    out["post"] = _likert(out["post"], f"{path.name} post")
    return out


def trial_rows(table: pd.DataFrame) -> pd.DataFrame:
    """Rows answering the per-trial questions (everything but the between-block question)."""
    return table[table["block"] != OVERALL_BLOCK]
