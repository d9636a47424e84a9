"""Trial logs: per-tick table, event stream and metadata, saved side by side.

Outputs for a trial labelled ``HW+HD#2``:
    - HW_HD-2.ticks.csv: one row per tick, column order from ``tick_columns``
    - HW_HD-2.events.jsonl: one JSON record per event, sorted by time
    - HW_HD-2.meta.json: config echo, joint names, hold poses, stop info

Files carry no wall-clock data, so identical runs give identical bytes.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from models.config import parse_signal_set
from models.enums import TASK_AXES, signal_channels
from models.errors import InputError
from pipeline.events import TrialEvent

logger = logging.getLogger(__name__)

POSE_AXES = ["x", "y", "z", "qx", "qy", "qz", "qw"]
ERROR_AXES = ["x", "y", "z", "rx", "ry", "rz"]
XYZ = ["x", "y", "z"]
FLOAT_FORMAT = "%.12g"


def tick_columns(joint_names: List[str], hands: List[str]) -> List[str]:
    columns = ["t", "step_index", "step_phase", "cycle", "stopped", "base_x", "base_y", "torso_yaw_offset"]
    for prefix in ("q", "q_c", "qdot_c", "blend"):
        columns += [f"{prefix}.{name}" for name in joint_names]
    for hand in hands:
        columns += [f"lambda.{hand}", f"over.{hand}", f"deviation.{hand}"]
        columns += [f"mu.{hand}.{a}" for a in TASK_AXES]
        for prefix in ("measured", "applied", "virtual", "impedance"):
            columns += [f"{prefix}.{hand}.{a}" for a in TASK_AXES]
        columns += [f"pose.{hand}.{a}" for a in POSE_AXES]
        columns += [f"offset.{hand}.{a}" for a in XYZ]
        columns += [f"error.{hand}.{a}" for a in ERROR_AXES]
        columns += [f"partner.{hand}.{a}" for a in XYZ]
    return columns


_INT_COLUMNS = ("step_index", "cycle", "stopped")


@dataclass
class TrialLog:
    label: str
    ticks: pd.DataFrame
    events: List[TrialEvent]
    meta: Dict[str, Any] = field(default_factory=dict)

    @property
    def hands(self) -> List[str]:
        return list(self.meta.get("hands", []))

    @property
    def joint_names(self) -> List[str]:
        return list(self.meta.get("joint_names", []))

    def events_of(self, kind: str) -> List[TrialEvent]:
        return [e for e in self.events if e.kind == kind]

    @property
    def stop_time(self) -> float | None:
        stops = self.events_of("stop")
        return stops[0].time if stops else None

    def hand_positions(self, hand: str) -> np.ndarray:
        return self.ticks[[f"pose.{hand}.{a}" for a in XYZ]].to_numpy()


def frame_rows(rows: List[np.ndarray], columns: List[str]) -> pd.DataFrame:
    ticks = pd.DataFrame(np.vstack(rows) if rows else np.empty((0, len(columns))), columns=columns)
    for name in _INT_COLUMNS:
        ticks[name] = ticks[name].astype(int)
    return ticks


def log_stem(label: str) -> str:
    return label.replace("+", "_").replace("#", "-")


def write_trial_log(log: TrialLog, output_dir: str | Path) -> Dict[str, str]:
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    stem = log_stem(log.label)
    paths = {}

    ticks_path = output_dir / f"{stem}.ticks.csv"
    log.ticks.to_csv(ticks_path, index=False, float_format=FLOAT_FORMAT)
    paths["ticks"] = str(ticks_path)
    logger.info("Saved ticks: %s (%d rows)", ticks_path, len(log.ticks))

    events_path = output_dir / f"{stem}.events.jsonl"
    with open(events_path, "w", encoding="utf-8") as f:
        for event in log.events:
            f.write(json.dumps(event.to_dict(), sort_keys=True) + "\n")
    paths["events"] = str(events_path)
    logger.info("Saved events: %s (%d records)", events_path, len(log.events))

    meta_path = output_dir / f"{stem}.meta.json"
    with open(meta_path, "w", encoding="utf-8") as f:
        json.dump(log.meta, f, indent=2, sort_keys=True)
    paths["meta"] = str(meta_path)
    logger.info("Saved metadata: %s", meta_path)

    return paths


def _prefix(path: str | Path) -> Path:
    path = Path(path)
    for suffix in (".ticks.csv", ".events.jsonl", ".meta.json"):
        if path.name.endswith(suffix):
            return path.with_name(path.name[: -len(suffix)])
    return path


def read_trial_log(path: str | Path) -> TrialLog:
    """Load a log from its stem or from any one of its three files."""
    prefix = _prefix(path)
    meta_path = prefix.with_name(prefix.name + ".meta.json")
    ticks_path = prefix.with_name(prefix.name + ".ticks.csv")
    events_path = prefix.with_name(prefix.name + ".events.jsonl")
    for p in (meta_path, ticks_path, events_path):
        if not p.exists():
            raise InputError(f"Missing trial log file: {p}")

    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    ticks = pd.read_csv(ticks_path)
    events = []
    for line in events_path.read_text(encoding="utf-8").splitlines():
        if line.strip():
            record = json.loads(line)
            events.append(TrialEvent(time=record["time"], kind=record["kind"], payload=record["payload"]))
    return TrialLog(label=meta.get("label", prefix.name), ticks=ticks, events=events, meta=meta)


def trial_summary(log: TrialLog) -> Dict[str, Any]:
    """Controller metrics of one trial, one flat record."""
    ticks = log.ticks
    summary: Dict[str, Any] = {
        "label": log.label,
        "signals": log.meta.get("signals", ""),
        "channels": "+".join(signal_channels(parse_signal_set(log.meta.get("signals") or "NS"))),
        "ticks": len(ticks),
        "steps": len(log.events_of("step_onset")),
        "utterances": len(log.events_of("utterance")),
        "stopped": log.stop_time is not None,
        "stop_time": log.stop_time,
        "stop_hand": log.events_of("stop")[0].payload.get("hand") if log.stop_time is not None else None,
    }
    yaw_joint = log.meta.get("torso_yaw_joint")
    summary["peak_torso_yaw"] = float(ticks[f"q_c.{yaw_joint}"].abs().max()) if yaw_joint else float("nan")
    summary["peak_torso_yaw_offset"] = float(ticks["torso_yaw_offset"].abs().max())
    for hand in log.hands:
        measured = ticks[[f"measured.{hand}.{a}" for a in TASK_AXES[:3]]].to_numpy()
        offsets = ticks[[f"offset.{hand}.{a}" for a in XYZ]].to_numpy()
        summary[f"peak_deviation.{hand}"] = float(ticks[f"deviation.{hand}"].max())
        summary[f"peak_offset.{hand}"] = float(np.linalg.norm(offsets, axis=1).max())
        summary[f"max_force.{hand}"] = float(np.linalg.norm(measured, axis=1).max())
        summary[f"min_lambda.{hand}"] = float(ticks[f"lambda.{hand}"].min())
    return summary
