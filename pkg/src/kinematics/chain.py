"""Upper-body kinematic chain: forward kinematics, geometric Jacobians and limits.

The tree is torso joints from the base, then one chain per arm hanging off the
last torso joint. Joint vectors are ordered torso, then left arm, then right arm.
All joints are revolute. Models are immutable and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Mapping, Sequence, Tuple

import networkx as nx
import numpy as np
import numpy.typing as npt
from scipy.spatial.transform import Rotation

from kinematics.spatial import Pose, Twist, Vector, poses_from_matrices
from models.config import JointConfig, ModelConfig
from models.enums import HandId
from models.errors import ConfigurationError

JointVector = npt.NDArray[np.float64]


def _read_only(values: Sequence[float]) -> JointVector:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class JointDef:
    name: str
    axis: Vector
    offset: Vector
    lower: float
    upper: float
    velocity_limit: float


@dataclass(frozen=True, eq=False)
class Frames:
    """World transform of every joint frame for one configuration."""

    rotations: npt.NDArray[np.float64]
    origins: npt.NDArray[np.float64]


@dataclass(frozen=True, eq=False)
class KinematicModel:
    joints: Tuple[JointDef, ...]
    parents: Tuple[int, ...]
    hands: Tuple[HandId, ...]
    hand_frames: Mapping[HandId, str]
    hand_parents: Mapping[HandId, int]
    hand_offsets: Mapping[HandId, Vector]
    chain_masks: Mapping[HandId, npt.NDArray[np.bool_]]
    torso_mask: npt.NDArray[np.bool_]
    base_frame: str
    hold: JointVector
    torso_yaw_index: int | None
    tree: nx.DiGraph
    axes: npt.NDArray[np.float64]

    @property
    def dof(self) -> int:
        return len(self.joints)

    @cached_property
    def joint_names(self) -> list[str]:
        return [j.name for j in self.joints]

    @cached_property
    def lower(self) -> JointVector:
        return _read_only([j.lower for j in self.joints])

    @cached_property
    def upper(self) -> JointVector:
        return _read_only([j.upper for j in self.joints])

    @cached_property
    def velocity_limits(self) -> JointVector:
        return _read_only([j.velocity_limit for j in self.joints])

    def index(self, name: str) -> int:
        return self.joint_names.index(name)

    def check_hand(self, hand: HandId | str) -> HandId:
        try:
            hand = HandId(hand)
        except ValueError as exc:
            raise ConfigurationError(f"Unknown hand identifier: {hand!r}") from exc
        if hand not in self.hand_parents:
            raise ConfigurationError(f"Model has no {hand} hand")
        return hand


def _joint_def(cfg: JointConfig) -> JointDef:
    axis = np.array(cfg.axis, dtype=float)
    offset = np.array(cfg.offset, dtype=float)
    axis.setflags(write=False)
    offset.setflags(write=False)
    lower, upper = cfg.limits
    return JointDef(cfg.name, axis, offset, float(lower), float(upper), float(cfg.velocity_limit))


def _frozen_axes(joints: Sequence[JointConfig]) -> npt.NDArray[np.float64]:
    axes = np.array([j.axis for j in joints], dtype=float)
    axes.setflags(write=False)
    return axes


def build_model(config: ModelConfig) -> KinematicModel:
    """Assemble the joint tree and derive chain membership from it."""
    tree = nx.DiGraph()
    tree.add_node(config.base_frame, kind="base")

    ordered: list[JointConfig] = list(config.torso)
    parent = config.base_frame
    for joint in config.torso:
        tree.add_node(joint.name, kind="joint")
        tree.add_edge(parent, joint.name)
        parent = joint.name
    torso_tip = parent

    hand_order = [h for h in (HandId.LEFT, HandId.RIGHT) if h in config.arms]
    for hand in hand_order:
        arm = config.arms[hand]
        parent = torso_tip
        for joint in arm.joints:
            tree.add_node(joint.name, kind="joint")
            tree.add_edge(parent, joint.name)
            parent = joint.name
            ordered.append(joint)
        if arm.frame in tree:
            raise ConfigurationError(f"Hand frame {arm.frame!r} collides with another frame")
        tree.add_node(arm.frame, kind="hand", hand=hand)
        tree.add_edge(parent, arm.frame)

    if not nx.is_tree(tree):
        raise ConfigurationError("Kinematic description is not a tree")

    names = [j.name for j in ordered]
    position = {name: i for i, name in enumerate(names)}

    def parent_index(node: str) -> int:
        (pred,) = tree.predecessors(node)
        return position.get(pred, -1)

    parents = tuple(parent_index(name) for name in names)
    hand_parents: Dict[HandId, int] = {}
    hand_offsets: Dict[HandId, Vector] = {}
    chain_masks: Dict[HandId, npt.NDArray[np.bool_]] = {}
    for hand in hand_order:
        arm = config.arms[hand]
        hand_parents[hand] = parent_index(arm.frame)
        offset = np.array(arm.hand_offset, dtype=float)
        offset.setflags(write=False)
        hand_offsets[hand] = offset
        ancestors = nx.ancestors(tree, arm.frame)
        mask = np.array([name in ancestors for name in names])
        mask.setflags(write=False)
        chain_masks[hand] = mask

    torso_names = {j.name for j in config.torso}
    torso_mask = np.array([name in torso_names for name in names])
    torso_mask.setflags(write=False)
    hold = np.array([j.hold for j in ordered], dtype=float)
    hold.setflags(write=False)

    return KinematicModel(
        joints=tuple(_joint_def(j) for j in ordered),
        parents=parents,
        hands=tuple(hand_order),
        hand_frames={h: config.arms[h].frame for h in hand_order},
        hand_parents=hand_parents,
        hand_offsets=hand_offsets,
        chain_masks=chain_masks,
        torso_mask=torso_mask,
        base_frame=config.base_frame,
        hold=hold,
        torso_yaw_index=position[config.torso_yaw_joint] if config.torso_yaw_joint else None,
        tree=tree,
        axes=_frozen_axes(ordered),
    )


# ---------------------------------------------------------------------------
# Kinematics
# ---------------------------------------------------------------------------


def _as_joint_vector(model: KinematicModel, q: npt.ArrayLike) -> JointVector:
    q = np.asarray(q, dtype=float)
    if q.shape != (model.dof,):
        raise ConfigurationError(f"Joint vector has shape {q.shape}, model has {model.dof} joints")
    return q


def compute_frames(model: KinematicModel, q: npt.ArrayLike) -> Frames:
    """Evaluate every joint frame once; both hands reuse the result."""
    q = _as_joint_vector(model, q)
    local = Rotation.from_rotvec(model.axes * q[:, None]).as_matrix()
    rotations = np.empty((model.dof, 3, 3))
    origins = np.empty((model.dof, 3))
    for i, (joint, parent) in enumerate(zip(model.joints, model.parents)):
        if parent < 0:
            origins[i] = joint.offset
            rotations[i] = local[i]
        else:
            origins[i] = origins[parent] + rotations[parent] @ joint.offset
            rotations[i] = rotations[parent] @ local[i]
    return Frames(rotations=rotations, origins=origins)


def _hand_transform(model: KinematicModel, frames: Frames, hand: HandId) -> Tuple[Vector, np.ndarray]:
    parent = model.hand_parents[hand]
    rotation = frames.rotations[parent]
    position = frames.origins[parent] + rotation @ model.hand_offsets[hand]
    return position, rotation


def forward_kinematics(
    model: KinematicModel, q: npt.ArrayLike, hand: HandId | str, frames: Frames | None = None
) -> Pose:
    hand = model.check_hand(hand)
    frames = frames or compute_frames(model, q)
    position, rotation = _hand_transform(model, frames, hand)
    return Pose.from_matrix(position, rotation)


_NEXT = [1, 2, 0]
_PREV = [2, 0, 1]


def _world_axes(model: KinematicModel, frames: Frames) -> npt.NDArray[np.float64]:
    return np.einsum("nij,nj->ni", frames.rotations, model.axes)


def _hand_jacobian(
    model: KinematicModel, frames: Frames, world_axes: npt.NDArray[np.float64], hand: HandId, position: Vector
) -> npt.NDArray[np.float64]:
    lever = position - frames.origins
    linear = world_axes[:, _NEXT] * lever[:, _PREV] - world_axes[:, _PREV] * lever[:, _NEXT]
    return np.where(model.chain_masks[hand], np.vstack([linear.T, world_axes.T]), 0.0)


def jacobian(
    model: KinematicModel, q: npt.ArrayLike, hand: HandId | str, frames: Frames | None = None
) -> npt.NDArray[np.float64]:
    """Geometric Jacobian (linear rows first) of a hand in the base frame."""
    hand = model.check_hand(hand)
    frames = frames or compute_frames(model, q)
    position, _ = _hand_transform(model, frames, hand)
    return _hand_jacobian(model, frames, _world_axes(model, frames), hand, position)


def hand_kinematics(
    model: KinematicModel, frames: Frames
) -> Tuple[Dict[HandId, Pose], Dict[HandId, npt.NDArray[np.float64]]]:
    """Poses and Jacobians of every hand from one set of frames."""
    world_axes = _world_axes(model, frames)
    transforms = [_hand_transform(model, frames, hand) for hand in model.hands]
    poses = poses_from_matrices([p for p, _ in transforms], [r for _, r in transforms])
    jacobians = {
        hand: _hand_jacobian(model, frames, world_axes, hand, position)
        for hand, (position, _) in zip(model.hands, transforms)
    }
    return dict(zip(model.hands, poses)), jacobians


def hand_twist(
    model: KinematicModel, q: npt.ArrayLike, qdot: npt.ArrayLike, hand: HandId | str, frames: Frames | None = None
) -> Twist:
    return Twist.from_vector(jacobian(model, q, hand, frames) @ np.asarray(qdot, dtype=float))


def clamp_to_limits(
    model: KinematicModel, q: npt.ArrayLike, qdot: npt.ArrayLike, dt: float
) -> Tuple[JointVector, JointVector]:
    """Clip velocities to their limits, integrate, then clip positions."""
    q = _as_joint_vector(model, q)
    qdot = _as_joint_vector(model, qdot)
    vmax = model.velocity_limits
    clipped = np.clip(qdot, -vmax, vmax)
    q_next = np.clip(q + clipped * dt, model.lower, model.upper)
    return q_next, clipped


def hold_posture(model: KinematicModel) -> JointVector:
    return model.hold.copy()


def hold_poses(model: KinematicModel) -> Dict[HandId, Pose]:
    poses, _ = hand_kinematics(model, compute_frames(model, model.hold))
    return poses


def random_configuration(model: KinematicModel, rng: np.random.Generator) -> JointVector:
    return rng.uniform(model.lower, model.upper)
