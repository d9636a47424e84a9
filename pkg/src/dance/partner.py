"""Simulated follower hands closing the force loop at the robot's wrists.

Human hands live in the robot base frame and are joined to the robot palms by
a spring-damper. Modes:

- compliant-follower: each human hand relaxes toward the robot hand with a
  first-order lag,
- resistive: human hands relax toward where they started,
- push-away: compliant until the onset, then the target jumps
  ``push_distance`` along ``push_direction`` from the robot hand,
- constant: a fixed force on ``push_hands`` between onset and release,
- absent: no contact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Mapping, Tuple

import numpy as np

from kinematics.spatial import Pose, Twist, Vector, Wrench
from models.config import PartnerConfig
from models.enums import HandId, PartnerMode
from models.errors import ConfigurationError

_HAND_INDEX = {HandId.LEFT: 0, HandId.RIGHT: 1}


@dataclass(frozen=True, eq=False)
class PartnerModel:
    mode: PartnerMode = PartnerMode.ABSENT
    stiffness: float = 150.0
    damping: float = 20.0
    lag: float = 0.3
    push_distance: float = 0.3
    push_direction: Vector = field(default_factory=lambda: np.array([-1.0, 0.0, 0.0]))
    push_onset: float = 5.0
    push_release: float | None = None
    push_force: Vector = field(default_factory=lambda: np.array([6.0, 0.0, 0.0]))
    push_hands: Tuple[HandId, ...] = (HandId.LEFT,)
    noise: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.stiffness, self.damping, self.lag, self.noise) < 0:
            raise ConfigurationError("Partner stiffness, damping, lag and noise must be >= 0")
        norm = float(np.linalg.norm(self.push_direction))
        if norm == 0.0:
            raise ConfigurationError("Push direction must be non-zero")
        object.__setattr__(self, "push_direction", np.asarray(self.push_direction, dtype=float) / norm)
        object.__setattr__(self, "push_force", np.asarray(self.push_force, dtype=float))

    @classmethod
    def from_config(cls, config: PartnerConfig, seed: int = 0) -> "PartnerModel":
        return cls(
            mode=config.mode,
            stiffness=config.stiffness,
            damping=config.damping,
            lag=config.lag,
            push_distance=config.push_distance,
            push_direction=np.array(config.push_direction, dtype=float),
            push_onset=config.push_onset,
            push_release=config.push_release,
            push_force=np.array(config.push_force, dtype=float),
            push_hands=tuple(config.push_hands),
            noise=config.noise,
            seed=seed,
        )

    def pushing(self, t: float) -> bool:
        return t >= self.push_onset and (self.push_release is None or t < self.push_release)


@dataclass(frozen=True, eq=False)
class PartnerState:
    positions: Mapping[HandId, Vector]
    velocities: Mapping[HandId, Vector]
    anchors: Mapping[HandId, Vector]
    push_targets: Mapping[HandId, Vector] | None = None


def init_partner(robot_poses: Mapping[HandId, Pose]) -> PartnerState:
    """Human hands start in contact with the robot palms, at rest."""
    positions = {hand: np.array(pose.position) for hand, pose in robot_poses.items()}
    return PartnerState(
        positions=positions,
        velocities={hand: np.zeros(3) for hand in robot_poses},
        anchors={hand: p.copy() for hand, p in positions.items()},
    )


def _noise(partner: PartnerModel, hand: HandId, t: float) -> Vector:
    if partner.noise == 0.0:
        return np.zeros(3)
    rng = np.random.default_rng([partner.seed, int(round(t * 1e6)), _HAND_INDEX[hand]])
    return rng.normal(0.0, partner.noise, 3)


def measured_wrench(
    partner: PartnerModel, state: PartnerState, hand: HandId, robot_hand_pose: Pose, robot_hand_vel: Twist, t: float
) -> Wrench:
    """Wrist F/T reading of one hand; moments are zero at a palm contact."""
    if partner.mode == PartnerMode.ABSENT:
        return Wrench.zero()
    if partner.mode == PartnerMode.CONSTANT:
        if hand in partner.push_hands and partner.pushing(t):
            return Wrench.from_force(partner.push_force + _noise(partner, hand, t))
        return Wrench.zero()
    force = partner.stiffness * (state.positions[hand] - robot_hand_pose.position) + partner.damping * (
        state.velocities[hand] - robot_hand_vel.linear
    )
    return Wrench.from_force(force + _noise(partner, hand, t))


def _relax(current: Vector, target: Vector, lag: float, dt: float) -> Vector:
    if lag <= 0.0:
        return target.copy()
    return current + (target - current) * (1.0 - np.exp(-dt / lag))


def step_partner(
    partner: PartnerModel, state: PartnerState, robot_poses: Mapping[HandId, Pose], dt: float, t: float
) -> PartnerState:
    robot = {hand: np.asarray(pose.position, dtype=float) for hand, pose in robot_poses.items()}
    if partner.mode in (PartnerMode.ABSENT, PartnerMode.CONSTANT):
        return replace(state, positions=robot, velocities={hand: np.zeros(3) for hand in robot})

    push_targets = state.push_targets
    targets: Dict[HandId, Vector] = {}
    if partner.mode == PartnerMode.RESISTIVE:
        targets = {hand: state.anchors[hand] for hand in robot}
    elif partner.mode == PartnerMode.PUSH_AWAY and partner.pushing(t):
        if push_targets is None:
            push_targets = {hand: p + partner.push_distance * partner.push_direction for hand, p in robot.items()}
        targets = dict(push_targets)
    else:
        targets = robot

    positions = {hand: _relax(state.positions[hand], targets[hand], partner.lag, dt) for hand in robot}
    velocities = {hand: (positions[hand] - state.positions[hand]) / dt for hand in robot}
    return replace(state, positions=positions, velocities=velocities, push_targets=push_targets)
