"""Static figures for questionnaire metrics and trial logs (matplotlib, Agg)."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Dict, List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from analysis.likert import LikertSummary  # noqa: E402
from pipeline.log import TrialLog, log_stem  # noqa: E402

logger = logging.getLogger(__name__)


def _save(fig: plt.Figure, path: Path) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    logger.info("Saved figure: %s", path)
    return str(path)


def plot_preference(scores: pd.DataFrame, path: str | Path) -> str:
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.bar(scores["trial"], scores["score"], color="tab:blue")
    ax.axhline(3.0, color="grey", linestyle="--", linewidth=1)
    ax.set_ylim(1, 5)
    ax.set_ylabel("preference (1 worst - 5 best)")
    ax.tick_params(axis="x", rotation=45)
    return _save(fig, Path(path))


def plot_block_weights(weights: Dict[str, pd.DataFrame], path: str | Path) -> str:
    fig, axes = plt.subplots(1, len(weights), figsize=(4 * len(weights), 4), squeeze=False)
    for ax, (block, table) in zip(axes[0], weights.items()):
        x = np.arange(len(table))
        ax.bar(x - 0.2, table["best_weight"], width=0.4, label="best", color="tab:green")
        ax.bar(x + 0.2, table["worst_weight"], width=0.4, label="worst", color="tab:red")
        ax.set_xticks(x, table["trial"], rotation=45)
        ax.set_title(f"block {block}")
    axes[0][0].legend()
    return _save(fig, Path(path))


def plot_likert(summary: LikertSummary, path: str | Path) -> str:
    fig, axes = plt.subplots(2, 1, figsize=(10, 7))
    for measure, color in (("confidence", "tab:purple"), ("comfort", "tab:orange")):
        cells = summary.per_trial[summary.per_trial["measure"] == measure]
        axes[0].errorbar(
            cells["trial"], cells["mean"], yerr=cells["std"], fmt="o", capsize=3, label=measure, color=color
        )
        series = summary.per_order[summary.per_order["measure"] == measure]
        axes[1].plot(series["order"], series["mean"], marker="o", label=measure, color=color)
        low, high = series["mean"] - series["std"], series["mean"] + series["std"]
        axes[1].fill_between(series["order"], low, high, alpha=0.2, color=color)
    axes[0].set_ylim(0.5, 5.5)
    axes[0].tick_params(axis="x", rotation=45)
    axes[0].legend()
    axes[1].set_xlabel("trial position in block")
    axes[1].set_ylim(0.5, 5.5)
    return _save(fig, Path(path))


def plot_trial(log: TrialLog, path: str | Path) -> str:
    ticks = log.ticks
    t = ticks["t"]
    fig, axes = plt.subplots(4, 1, figsize=(10, 9), sharex=True)
    for hand in log.hands:
        axes[0].plot(t, ticks[f"deviation.{hand}"], label=f"{hand} deviation")
        axes[1].plot(t, ticks[f"lambda.{hand}"], label=f"{hand} lambda")
    axes[0].set_ylabel("m")
    yaw_joint = log.meta.get("torso_yaw_joint")
    for name in log.joint_names:
        axes[2].plot(t, ticks[f"blend.{name}"], linewidth=1)
    axes[2].set_ylabel("blend")
    if yaw_joint:
        axes[3].plot(t, ticks[f"q_c.{yaw_joint}"], label="torso yaw")
        axes[3].plot(t, ticks["torso_yaw_offset"], "--", label="offset")
    for stop in log.events_of("stop"):
        for ax in axes:
            ax.axvline(stop.time, color="red", linewidth=1)
    for ax in (axes[0], axes[1], axes[3]):
        ax.legend(loc="upper right")
    axes[3].set_xlabel("t [s]")
    axes[0].set_title(log.label)
    return _save(fig, Path(path))


def plot_trials(logs: List[TrialLog], output_dir: str | Path) -> List[str]:
    output_dir = Path(output_dir)
    return [plot_trial(log, output_dir / f"{log_stem(log.label)}.png") for log in logs]
