import numpy as np
import pytest

from dance.partner import PartnerModel, PartnerState, init_partner, measured_wrench, step_partner
from kinematics.spatial import Pose, Twist
from models.config import PartnerConfig
from models.enums import PartnerMode
from models.errors import ConfigurationError

DT = 0.005


def pose(x, y=0.0, z=0.0):
    return Pose.from_matrix([x, y, z], np.eye(3))


def contact(x=0.0):
    return init_partner({"left": pose(x)})


def test_coincident_hands_give_zero_wrench():
    partner = PartnerModel(mode=PartnerMode.COMPLIANT)
    wrench = measured_wrench(partner, contact(0.4), "left", pose(0.4), Twist.zero(), 0.0)
    assert not np.any(wrench.vector)


def test_spring_force_along_offset():
    partner = PartnerModel(mode=PartnerMode.RESISTIVE, stiffness=200.0, damping=0.0)
    wrench = measured_wrench(partner, contact(0.01), "left", pose(0.0), Twist.zero(), 0.0)
    np.testing.assert_allclose(wrench.force, [2.0, 0.0, 0.0])
    assert not np.any(wrench.moment)


def test_absent_partner_is_silent():
    partner = PartnerModel(mode=PartnerMode.ABSENT)
    state = PartnerState({"left": np.ones(3)}, {"left": np.ones(3)}, {"left": np.ones(3)})
    assert not np.any(measured_wrench(partner, state, "left", pose(0.0), Twist.zero(), 3.0).vector)


def test_instant_follower_tracks_robot_hand():
    partner = PartnerModel(mode=PartnerMode.COMPLIANT, lag=0.0)
    state = step_partner(partner, contact(0.0), {"left": pose(0.02, 0.01)}, DT, 0.0)
    np.testing.assert_allclose(state.positions["left"], [0.02, 0.01, 0.0])
    wrench = measured_wrench(partner, state, "left", pose(0.02, 0.01), Twist.from_vector([4, 2, 0, 0, 0, 0]), DT)
    assert np.linalg.norm(wrench.force) == pytest.approx(0.0, abs=1e-9)


def test_resistive_steady_state():
    partner = PartnerModel(mode=PartnerMode.RESISTIVE)
    state = contact(0.0)
    for k in range(400):
        state = step_partner(partner, state, {"left": pose(0.05)}, DT, k * DT)
    wrench = measured_wrench(partner, state, "left", pose(0.05), Twist.zero(), 2.0)
    assert np.linalg.norm(wrench.force) == pytest.approx(150.0 * 0.05, rel=1e-6)


def test_push_away_target_jumps_at_onset():
    partner = PartnerModel(mode=PartnerMode.PUSH_AWAY, lag=0.0, push_onset=1.0)
    state = step_partner(partner, contact(0.4), {"left": pose(0.4)}, DT, 0.5)
    np.testing.assert_allclose(state.positions["left"], [0.4, 0, 0])
    state = step_partner(partner, state, {"left": pose(0.4)}, DT, 1.0)
    np.testing.assert_allclose(state.positions["left"], [0.1, 0, 0])
    state = step_partner(partner, state, {"left": pose(0.3)}, DT, 1.005)
    np.testing.assert_allclose(state.positions["left"], [0.1, 0, 0])


def test_constant_push_window():
    partner = PartnerModel.from_config(
        PartnerConfig(mode="constant", push_force=(6, 0, 0), push_onset=1.0, push_release=2.0, push_hands=["left"])
    )
    state = contact(0.0)
    assert not np.any(measured_wrench(partner, state, "left", pose(0.0), Twist.zero(), 0.5).vector)
    np.testing.assert_allclose(measured_wrench(partner, state, "left", pose(0.0), Twist.zero(), 1.5).force, [6, 0, 0])
    assert not np.any(measured_wrench(partner, state, "left", pose(0.0), Twist.zero(), 2.0).vector)


def test_noise_is_seeded():
    a = PartnerModel(mode=PartnerMode.COMPLIANT, noise=0.5, seed=9)
    b = PartnerModel(mode=PartnerMode.COMPLIANT, noise=0.5, seed=9)
    c = PartnerModel(mode=PartnerMode.COMPLIANT, noise=0.5, seed=10)
    state = contact(0.0)
    wa = measured_wrench(a, state, "left", pose(0.0), Twist.zero(), 0.25).force
    wb = measured_wrench(b, state, "left", pose(0.0), Twist.zero(), 0.25).force
    wc = measured_wrench(c, state, "left", pose(0.0), Twist.zero(), 0.25).force
    assert wa.tobytes() == wb.tobytes()
    assert not np.array_equal(wa, wc)


def test_negative_gains_are_rejected():
    with pytest.raises(ConfigurationError):
        PartnerModel(mode=PartnerMode.COMPLIANT, stiffness=-1.0)
