import math

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from kinematics.chain import (
    clamp_to_limits,
    compute_frames,
    forward_kinematics,
    hand_twist,
    hold_posture,
    jacobian,
    random_configuration,
)
from kinematics.spatial import pose_difference
from models.errors import ConfigurationError


def test_rotor_forward_kinematics(rotor):
    assert forward_kinematics(rotor, [0.0], "left").position == pytest.approx([1.0, 0.0, 0.0])
    assert forward_kinematics(rotor, [math.pi / 2], "left").position == pytest.approx([0.0, 1.0, 0.0], abs=1e-12)


def test_rotor_jacobian(rotor):
    jac = jacobian(rotor, [0.0], "left")
    assert jac.shape == (6, 1)
    np.testing.assert_allclose(jac[:, 0], [0.0, 1.0, 0.0, 0.0, 0.0, 1.0], atol=1e-12)


def test_unknown_hand_is_configuration_error(rotor):
    with pytest.raises(ConfigurationError):
        forward_kinematics(rotor, [0.0], "right")
    with pytest.raises(ConfigurationError):
        jacobian(rotor, [0.0], "middle")


def test_default_model_layout(model):
    assert model.dof == 16
    assert model.hands == ("left", "right")
    assert model.torso_mask.sum() == 2
    assert model.chain_masks["left"].sum() == 9
    assert model.joint_names[model.torso_yaw_index] == "torso_1_joint"


def test_hold_pose_golden(model):
    q = hold_posture(model)
    left = forward_kinematics(model, q, "left")
    right = forward_kinematics(model, q, "right")
    np.testing.assert_allclose(left.position, [0.4289137011099807, 0.25, 0.11730112735239038], atol=1e-9)
    np.testing.assert_allclose(right.position, [0.4289137011099807, -0.25, 0.11730112735239038], atol=1e-9)
    expected = Rotation.from_euler("y", -1.5).as_matrix()
    np.testing.assert_allclose(Rotation.from_quat(left.orientation).as_matrix(), expected, atol=1e-9)
    assert np.linalg.norm(left.orientation) == pytest.approx(1.0, abs=1e-9)


def test_left_jacobian_ignores_right_arm(model):
    rng = np.random.default_rng(3)
    right_only = model.chain_masks["right"] & ~model.torso_mask
    for _ in range(10):
        q = random_configuration(model, rng)
        jac = jacobian(model, q, "left")
        assert not np.any(jac[:, right_only])
        assert np.any(jac[:, model.torso_mask])


def test_jacobian_matches_finite_differences(model):
    rng = np.random.default_rng(2024)
    h = 1e-6
    for _ in range(100):
        q = random_configuration(model, rng)
        frames = compute_frames(model, q)
        jacs = {hand: jacobian(model, q, hand, frames) for hand in model.hands}
        for j in range(model.dof):
            dq = np.zeros(model.dof)
            dq[j] = h
            plus = compute_frames(model, q + dq)
            minus = compute_frames(model, q - dq)
            for hand in model.hands:
                numeric = pose_difference(
                    forward_kinematics(model, q + dq, hand, plus), forward_kinematics(model, q - dq, hand, minus)
                ) / (2 * h)
                np.testing.assert_allclose(jacs[hand][:, j], numeric, atol=1e-6)


def test_forward_kinematics_is_bit_deterministic(model):
    q = random_configuration(model, np.random.default_rng(7))
    a = forward_kinematics(model, q, "right")
    b = forward_kinematics(model, q.copy(), "right")
    assert a.position.tobytes() == b.position.tobytes()
    assert a.orientation.tobytes() == b.orientation.tobytes()


def test_hand_twist_is_jacobian_times_velocity(model):
    q = hold_posture(model)
    qdot = np.linspace(-0.5, 0.5, model.dof)
    twist = hand_twist(model, q, qdot, "left")
    np.testing.assert_allclose(twist.vector, jacobian(model, q, "left") @ qdot)


def test_clamp_saturates_velocity(rotor):
    q, qdot = clamp_to_limits(rotor, [0.0], [2.0], 0.1)
    assert qdot[0] == 1.0
    assert q[0] == pytest.approx(0.1)


def test_clamp_keeps_feasible_inputs(rotor):
    q, qdot = clamp_to_limits(rotor, [0.2], [-0.5], 0.01)
    assert qdot[0] == -0.5
    assert q[0] == pytest.approx(0.195)


def test_clamp_absorbs_at_position_limit(rotor):
    q, _ = clamp_to_limits(rotor, [math.pi], [0.8], 0.01)
    assert q[0] == math.pi


def test_clamp_never_leaves_limits(model):
    rng = np.random.default_rng(11)
    for _ in range(50):
        q = rng.uniform(model.lower - 1.0, model.upper + 1.0)
        qdot = rng.normal(0.0, 10.0, model.dof)
        q_next, clipped = clamp_to_limits(model, q, qdot, 0.005)
        assert np.all(q_next >= model.lower) and np.all(q_next <= model.upper)
        assert np.all(np.abs(clipped) <= model.velocity_limits)


def test_wrong_joint_vector_length(model):
    with pytest.raises(ConfigurationError):
        compute_frames(model, np.zeros(3))
