"""Per-hand task-space control: admittance, impedance and threshold-gated fading.

The virtual wrench of one hand is the sum of three terms:

1. admittance: measured wrench scaled per axis by G_T,
2. impedance: spring-damper on the pose error, scaled by the fade factor lambda
   and the per-axis mask mu,
3. applied: the scheduled leading wrench, passed through unchanged.

lambda drops to 0 while the measured force or moment norm is at or above its
threshold and returns to 1 otherwise; mu drops to 0 on the world axes of an
active applied wrench. Both move linearly at 1 / fade_duration per second.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Tuple

import numpy as np
import numpy.typing as npt

from kinematics.spatial import Pose, Twist, Vector, Wrench
from models.config import TaskGainsConfig

AxisMask = npt.NDArray[np.bool_]

# Relative slack when snapping a ramp onto its target.
_SNAP = 1e-9


@dataclass(frozen=True, eq=False)
class TaskGains:
    admittance: Vector
    stiffness: Vector
    damping: Vector
    force_threshold: float
    moment_threshold: float
    fade_duration: float

    @classmethod
    def from_config(cls, config: TaskGainsConfig) -> "TaskGains":
        return cls(
            admittance=np.array(config.admittance, dtype=float),
            stiffness=np.array(config.stiffness, dtype=float),
            damping=np.array(config.damping, dtype=float),
            force_threshold=config.force_threshold,
            moment_threshold=config.moment_threshold,
            fade_duration=config.fade_duration,
        )


@dataclass(frozen=True, eq=False)
class FadeState:
    lam: float = 1.0
    mu: Vector = field(default_factory=lambda: np.ones(6))
    gated: bool = False
    clock: float = 0.0
    last_transition: float | None = None


def move_toward(value: npt.ArrayLike, target: npt.ArrayLike, step: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Linear ramp of ``value`` toward ``target`` by at most ``step``."""
    value = np.asarray(value, dtype=float)
    target = np.asarray(target, dtype=float)
    step = np.asarray(step, dtype=float)
    delta = target - value
    moved = value + np.clip(delta, -step, step)
    return np.where(np.abs(delta) <= step * (1.0 + _SNAP), target, moved)


def over_threshold(gains: TaskGains, measured: Wrench) -> bool:
    return bool(
        np.linalg.norm(measured.force) >= gains.force_threshold
        or np.linalg.norm(measured.moment) >= gains.moment_threshold
    )


def admittance_wrench(gains: TaskGains, measured: Wrench) -> Wrench:
    return Wrench.from_vector(gains.admittance * measured.vector)


def impedance_wrench(
    gains: TaskGains, fade: FadeState, pose_err: npt.ArrayLike, vel_err: Twist | npt.ArrayLike
) -> Wrench:
    pose_err = np.asarray(pose_err, dtype=float)
    vel = vel_err.vector if isinstance(vel_err, Twist) else np.asarray(vel_err, dtype=float)
    scale = fade.lam * fade.mu
    return Wrench.from_vector(-scale * (gains.stiffness * pose_err) - scale * (gains.damping * vel))


def update_fade(
    gains: TaskGains, fade: FadeState, measured: Wrench, applied_active_axes: npt.ArrayLike | None, dt: float
) -> FadeState:
    step = dt / gains.fade_duration
    gated = over_threshold(gains, measured)
    lam = float(move_toward(fade.lam, 0.0 if gated else 1.0, step))
    if applied_active_axes is None:
        active = np.zeros(6, dtype=bool)
    else:
        active = np.asarray(applied_active_axes, dtype=bool).reshape(6)
    mu = move_toward(fade.mu, np.where(active, 0.0, 1.0), step)
    clock = fade.clock + dt
    transition = clock if gated != fade.gated else fade.last_transition
    return replace(fade, lam=lam, mu=mu, gated=gated, clock=clock, last_transition=transition)


def task_wrench_terms(
    gains: TaskGains,
    fade: FadeState,
    measured: Wrench,
    pose_err: npt.ArrayLike,
    vel_err: Twist | npt.ArrayLike,
    applied: Wrench,
) -> Tuple[Wrench, Wrench, Wrench]:
    """Admittance part, impedance part and their sum with the applied wrench."""
    adm = admittance_wrench(gains, measured)
    imp = impedance_wrench(gains, fade, pose_err, vel_err)
    return adm, imp, adm + imp + applied


def task_wrench(
    gains: TaskGains,
    fade: FadeState,
    measured: Wrench,
    pose_err: npt.ArrayLike,
    vel_err: Twist | npt.ArrayLike,
    applied: Wrench,
) -> Wrench:
    return task_wrench_terms(gains, fade, measured, pose_err, vel_err, applied)[2]


def desired_pose(hold_pose: Pose, offset: npt.ArrayLike | None) -> Pose:
    """Hold pose shifted by the scheduled hand displacement (orientation kept)."""
    if offset is None:
        return hold_pose
    return hold_pose.translated(offset)
