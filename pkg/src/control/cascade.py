"""One control tick of the whole-body cascade.

The robot is position controlled and tracks its command ideally: the measured
configuration at a tick is the command integrated on the previous tick, and
the measured joint velocity is the realized change over that tick.

Per tick, for every hand:

1. over-threshold flag and fade update from the measured wrench,
2. pose error against the (possibly displaced) hold pose,
3. virtual wrench = admittance + impedance + applied.

Then for the whole body: projection, joint impedance around the (possibly
rotated) hold posture, blend update, velocity command and clamped integration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Mapping

import numpy as np
import numpy.typing as npt

from control.jointspace import (
    JointCommandState,
    JointGains,
    command_velocity,
    desired_posture,
    integrate_command,
    joint_impedance,
    project_wrenches,
    update_blend,
)
from control.taskspace import (
    FadeState,
    TaskGains,
    desired_pose,
    over_threshold,
    task_wrench_terms,
    update_fade,
)
from kinematics.chain import (
    Frames,
    JointVector,
    KinematicModel,
    compute_frames,
    hand_kinematics,
    hold_poses,
)
from kinematics.spatial import Pose, Twist, Vector, Wrench, pose_differences
from models.enums import HandId


@dataclass(frozen=True, eq=False)
class Observation:
    """Kinematics of one configuration, shared by the partner and the controller."""

    q: JointVector
    qdot: JointVector
    frames: Frames
    poses: Mapping[HandId, Pose]
    jacobians: Mapping[HandId, npt.NDArray[np.float64]]
    twists: Mapping[HandId, Twist]


@dataclass(frozen=True, eq=False)
class ControlInputs:
    measured: Mapping[HandId, Wrench] = field(default_factory=dict)
    applied: Mapping[HandId, Wrench] = field(default_factory=dict)
    active_axes: Mapping[HandId, npt.NDArray[np.bool_]] = field(default_factory=dict)
    setpoint_offsets: Mapping[HandId, Vector] = field(default_factory=dict)
    torso_yaw_offset: float = 0.0


@dataclass(frozen=True, eq=False)
class ControllerState:
    q: JointVector
    qdot: JointVector
    fades: Mapping[HandId, FadeState]
    command: JointCommandState


@dataclass(frozen=True, eq=False)
class ControllerStep:
    """Everything one tick computed, for logging and inspection."""

    over: Mapping[HandId, bool]
    setpoints: Mapping[HandId, Pose]
    pose_errors: Mapping[HandId, Vector]
    admittance: Mapping[HandId, Wrench]
    impedance: Mapping[HandId, Wrench]
    virtual: Mapping[HandId, Wrench]
    tau_adm: JointVector
    tau_imp: JointVector
    q_d: JointVector
    qdot_c: JointVector


class UpperBodyController:
    def __init__(self, model: KinematicModel, task_gains: TaskGains, joint_gains: JointGains):
        self.model = model
        self.task_gains = task_gains
        self.joint_gains = joint_gains
        self.hold = model.hold.copy()
        self.hold_poses = hold_poses(model)

    def initial_state(self, q: npt.ArrayLike | None = None) -> ControllerState:
        q = self.hold.copy() if q is None else np.array(q, dtype=float)
        return ControllerState(
            q=q,
            qdot=np.zeros_like(q),
            fades={hand: FadeState() for hand in self.model.hands},
            command=JointCommandState.at_rest(self.joint_gains, q),
        )

    def observe(self, state: ControllerState) -> Observation:
        model = self.model
        frames = compute_frames(model, state.q)
        poses, jacobians = hand_kinematics(model, frames)
        twists = {hand: Twist.from_vector(jacobians[hand] @ state.qdot) for hand in model.hands}
        return Observation(state.q, state.qdot, frames, poses, jacobians, twists)

    def pose_errors(
        self, observation: Observation, setpoint_offsets: Mapping[HandId, Vector] | None = None
    ) -> tuple[Dict[HandId, Pose], Dict[HandId, Vector]]:
        """Setpoints (hold poses shifted by the offsets) and the observed pose errors against them."""
        offsets = setpoint_offsets or {}
        hands = self.model.hands
        setpoints = {hand: desired_pose(self.hold_poses[hand], offsets.get(hand)) for hand in hands}
        diffs = pose_differences([observation.poses[h] for h in hands], [setpoints[h] for h in hands])
        return setpoints, dict(zip(hands, diffs))

    def step(
        self,
        state: ControllerState,
        observation: Observation,
        inputs: ControlInputs,
        dt: float,
        targets: tuple[Mapping[HandId, Pose], Mapping[HandId, Vector]] | None = None,
    ) -> tuple[ControllerState, ControllerStep]:
        """Advance one tick. ``targets`` is a ``pose_errors`` result for the same observation and offsets."""
        model = self.model
        gains = self.task_gains
        zero = Wrench.zero()

        over: Dict[HandId, bool] = {}
        fades: Dict[HandId, FadeState] = {}
        adm: Dict[HandId, Wrench] = {}
        imp: Dict[HandId, Wrench] = {}
        virtual: Dict[HandId, Wrench] = {}
        setpoints, errors = targets or self.pose_errors(observation, inputs.setpoint_offsets)
        for hand in model.hands:
            measured = inputs.measured.get(hand, zero)
            over[hand] = over_threshold(gains, measured)
            fades[hand] = update_fade(gains, state.fades[hand], measured, inputs.active_axes.get(hand), dt)
            adm[hand], imp[hand], virtual[hand] = task_wrench_terms(
                gains, fades[hand], measured, errors[hand], observation.twists[hand], inputs.applied.get(hand, zero)
            )

        tau_adm = project_wrenches(model, state.q, virtual, jacobians=observation.jacobians)
        q_d = desired_posture(model, self.hold, inputs.torso_yaw_offset)
        tau_imp = joint_impedance(self.joint_gains, state.q - q_d, state.qdot)

        command = update_blend(self.joint_gains, state.command, over, dt)
        qdot_c = command_velocity(self.joint_gains, command, tau_adm, tau_imp)
        command = integrate_command(model, command, qdot_c, dt)

        next_state = ControllerState(
            q=command.q_c.copy(),
            qdot=(command.q_c - state.q) / dt,
            fades=fades,
            command=command,
        )
        record = ControllerStep(
            over=over,
            setpoints=setpoints,
            pose_errors=errors,
            admittance=adm,
            impedance=imp,
            virtual=virtual,
            tau_adm=tau_adm,
            tau_imp=tau_imp,
            q_d=q_d,
            qdot_c=qdot_c,
        )
        return next_state, record
