"""Joint-space stage: wrench projection, joint impedance, blending and integration.

    tau_adm = (1 / n_h) * sum_i J_i^T F_i
    tau_imp = -K_PJ * (q - q_d) - K_DJ * qdot
    qdot_c  = G_J^a * tau_adm + blend * tau_imp

The blend gains slide to their per-joint minimum while any hand is over the
wrench threshold and back to the maximum otherwise. Gains map virtual torque
straight to commanded joint velocity, so they carry units rad / (s N m).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping

import numpy as np
import numpy.typing as npt

from control.taskspace import move_toward
from kinematics.chain import Frames, JointVector, KinematicModel, clamp_to_limits, compute_frames, jacobian
from kinematics.spatial import Wrench
from models.config import JointGainsConfig
from models.enums import HandId
from models.errors import ConfigurationError


@dataclass(frozen=True, eq=False)
class JointGains:
    stiffness: JointVector
    damping: JointVector
    admittance: JointVector
    blend_max: JointVector
    blend_min: JointVector
    blend_fade_duration: float

    @classmethod
    def from_config(cls, config: JointGainsConfig, model: KinematicModel) -> "JointGains":
        torso = model.torso_mask
        stiffness = np.where(torso, config.torso_stiffness, config.arm_stiffness)
        damping = np.where(torso, config.torso_damping, config.arm_damping)
        admittance = np.full(model.dof, config.admittance)
        blend_max = np.full(model.dof, config.blend_max)
        blend_min = np.where(torso, config.torso_blend_min, config.arm_blend_min)

        for name, override in config.overrides.items():
            if name not in model.joint_names:
                raise ConfigurationError(f"Gain override for unknown joint {name!r}")
            i = model.index(name)
            for target, value in (
                (stiffness, override.stiffness),
                (damping, override.damping),
                (admittance, override.admittance),
                (blend_min, override.blend_min),
                (blend_max, override.blend_max),
            ):
                if value is not None:
                    target[i] = value
        if np.any(blend_min > blend_max):
            raise ConfigurationError("Blend minimum exceeds blend maximum after overrides")
        return cls(stiffness, damping, admittance, blend_max, blend_min, config.blend_fade_duration)


@dataclass(frozen=True, eq=False)
class JointCommandState:
    q_c: JointVector
    qdot_c: JointVector
    blend: JointVector

    @classmethod
    def at_rest(cls, gains: JointGains, q: npt.ArrayLike) -> "JointCommandState":
        q = np.array(q, dtype=float)
        return cls(q_c=q, qdot_c=np.zeros_like(q), blend=gains.blend_max.copy())


def project_wrenches(
    model: KinematicModel,
    q: npt.ArrayLike,
    wrenches: Mapping[HandId, Wrench],
    jacobians: Mapping[HandId, npt.NDArray[np.float64]] | None = None,
    frames: Frames | None = None,
) -> JointVector:
    """Jacobian-transpose projection averaged over the model's hands."""
    if len(wrenches) != len(model.hands) or set(wrenches) != set(model.hands):
        raise ConfigurationError(
            f"Expected wrenches for hands {[h.value for h in model.hands]}, got {[str(h) for h in wrenches]}"
        )
    if jacobians is None:
        frames = frames or compute_frames(model, q)
        jacobians = {hand: jacobian(model, q, hand, frames) for hand in model.hands}
    torque = np.zeros(model.dof)
    for hand in model.hands:
        torque += jacobians[hand].T @ wrenches[hand].vector
    return torque / len(model.hands)


def joint_impedance(gains: JointGains, q_err: npt.ArrayLike, qdot_err: npt.ArrayLike) -> JointVector:
    return -gains.stiffness * np.asarray(q_err, dtype=float) - gains.damping * np.asarray(qdot_err, dtype=float)


def update_blend(
    gains: JointGains, state: JointCommandState, above_threshold: Mapping[HandId, bool] | Iterable[bool], dt: float
) -> JointCommandState:
    flags = above_threshold.values() if isinstance(above_threshold, Mapping) else above_threshold
    target = gains.blend_min if any(flags) else gains.blend_max
    step = (gains.blend_max - gains.blend_min) * dt / gains.blend_fade_duration
    return replace(state, blend=move_toward(state.blend, target, step))


def command_velocity(
    gains: JointGains, state: JointCommandState, tau_adm: npt.ArrayLike, tau_imp: npt.ArrayLike
) -> JointVector:
    return gains.admittance * np.asarray(tau_adm, dtype=float) + state.blend * np.asarray(tau_imp, dtype=float)


def integrate_command(
    model: KinematicModel, state: JointCommandState, qdot_c: npt.ArrayLike, dt: float
) -> JointCommandState:
    q_c, clipped = clamp_to_limits(model, state.q_c, qdot_c, dt)
    return replace(state, q_c=q_c, qdot_c=clipped)


def desired_posture(model: KinematicModel, hold: npt.ArrayLike, torso_yaw_offset: float = 0.0) -> JointVector:
    """q_d for the joint impedance: the hold posture with the torso yaw target shifted."""
    q_d = np.array(hold, dtype=float)
    if torso_yaw_offset:
        if model.torso_yaw_index is None:
            raise ConfigurationError("Torso rotation requested but the model names no torso yaw joint")
        q_d[model.torso_yaw_index] += torso_yaw_offset
    return q_d
