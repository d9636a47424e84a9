import pandas as pd
import pytest

from analysis.ingest import normalize_questionnaire
from analysis.likert import likert_summary, pre_post_summary


def responses(rows):
    frame = pd.DataFrame(rows, columns=["participant", "trial", "confidence", "comfort", "order"])
    return normalize_questionnaire(frame.assign(block="1", vote="none"))


def test_mean_and_population_std():
    summary = likert_summary(responses([["P1", "HW", 3, 4, 1], ["P2", "HW", 5, 4, 1]]))
    cells = summary.per_trial.set_index("measure")
    assert cells.loc["confidence", "mean"] == 4.0
    assert cells.loc["confidence", "std"] == 1.0
    assert cells.loc["comfort", "std"] == 0.0
    assert cells.loc["comfort", "n"] == 2


def test_empty_cell_is_warned_not_filled():
    summary = likert_summary(responses([["P1", "HW", None, 4, 1], ["P1", "HD", 2, 3, 2]]))
    assert not ((summary.per_trial["trial"] == "HW") & (summary.per_trial["measure"] == "confidence")).any()
    assert "No confidence responses for trial HW" in summary.warnings


def test_requested_trial_without_rows():
    summary = likert_summary(responses([["P1", "HW", 3, 4, 1]]), trials=["HW", "SC"])
    assert set(summary.per_trial["trial"]) == {"HW"}
    assert len(summary.warnings) == 2


def test_order_series():
    rows = [["P1", "HW", 2, 3, 1], ["P2", "HD", 4, 5, 1], ["P1", "HD", 5, 5, 2]]
    per_order = likert_summary(responses(rows)).per_order.set_index(["order", "measure"])
    assert per_order.loc[(1, "confidence"), "mean"] == 3.0
    assert per_order.loc[(2, "comfort"), "n"] == 1


def test_pre_post():
    table = pd.DataFrame({"participant": ["P1", "P2"], "pre": [3, 4], "post": [4, 3]}).astype(
        {"pre": "Int64", "post": "Int64"}
    )
    summary = pre_post_summary(table)
    assert summary["pre_mean"] == pytest.approx(3.5)
    assert summary["post_std"] == pytest.approx(0.5)
    assert summary["decreased"] == 1
