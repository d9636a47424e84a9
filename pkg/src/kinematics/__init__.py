"""Upper-body kinematic description: spatial types, chain evaluation, geometry files."""

from kinematics.chain import (
    Frames,
    JointVector,
    KinematicModel,
    build_model,
    clamp_to_limits,
    compute_frames,
    forward_kinematics,
    hand_kinematics,
    hand_twist,
    hold_posture,
    hold_poses,
    jacobian,
)
from kinematics.loader import default_model, load_model
from kinematics.spatial import Pose, Twist, Wrench, pose_difference, pose_differences

__all__ = [
    "Frames",
    "JointVector",
    "KinematicModel",
    "Pose",
    "Twist",
    "Wrench",
    "build_model",
    "clamp_to_limits",
    "compute_frames",
    "default_model",
    "forward_kinematics",
    "hand_kinematics",
    "hand_twist",
    "hold_posture",
    "hold_poses",
    "jacobian",
    "load_model",
    "pose_difference",
    "pose_differences",
]
