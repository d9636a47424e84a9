import numpy as np
import pytest

from models.config import load_trial_config
from models.enums import BOX_STEP_PATTERN
from pipeline.log import write_trial_log
from pipeline.paths import DATA_DIR
from pipeline.simulate import run_trial

HANDS = ("left", "right")
TASK = ("fx", "fy", "fz", "mx", "my", "mz")


def window(ticks, start, end):
    return ticks[(ticks["t"] >= start - 1e-9) & (ticks["t"] < end - 1e-9)]


def hand_error(ticks, hand):
    return np.linalg.norm(ticks[[f"error.{hand}.{a}" for a in "xyz"]].to_numpy(), axis=1)


def constant_push(force):
    return {"mode": "constant", "push_force": force, "push_onset": 1.0, "push_release": 2.0, "push_hands": ["left"]}


@pytest.fixture(scope="module")
def push_6n(short_trial):
    return run_trial(short_trial("NS", partner=constant_push([6, 0, 0])))


@pytest.fixture(scope="module")
def push_away():
    return run_trial(load_trial_config(DATA_DIR / "trials" / "push_away.yaml"))


@pytest.fixture(scope="module")
def box_30s(short_trial):
    return run_trial(short_trial("NS", duration=30.0, partner={"mode": "compliant-follower"}))


def test_no_signal_no_partner_holds_still(short_trial):
    log = run_trial(short_trial("NS", duration=2.0))
    for hand in HANDS:
        assert log.ticks[f"deviation.{hand}"].max() < 1e-6
    assert not log.events_of("utterance")


def test_box_closes_after_five_cycles(box_30s):
    ticks = box_30s.ticks
    assert len(ticks) == 6000
    completes = box_30s.events_of("step_complete")
    assert len(completes) == 30
    assert completes[-1].payload["cycle"] == 5
    assert ticks["base_x"].iloc[-1] == pytest.approx(0.0, abs=1e-9)
    assert ticks["base_y"].iloc[-1] == pytest.approx(0.0, abs=1e-9)

    previous = np.zeros(2)
    for i, event in enumerate(completes):
        base = np.array(event.payload["base"])
        _, fwd, lat = BOX_STEP_PATTERN[i % 6]
        np.testing.assert_allclose(base - previous, [0.13 * fwd, 0.145 * lat], atol=1e-12)
        previous = base


def test_over_threshold_push_zeroes_impedance(push_6n):
    faded = window(push_6n.ticks, 1.5, 2.0)
    assert len(faded) == 100
    for axis in TASK:
        assert (faded[f"impedance.left.{axis}"] == 0.0).all()
    assert (faded["lambda.left"] == 0.0).all()


def test_pushed_hand_moves_along_force(push_6n):
    pushed = window(push_6n.ticks, 1.0, 2.0)["pose.left.x"].to_numpy()
    assert np.all(np.diff(pushed) >= -1e-6)
    assert pushed[-1] - pushed[0] > 0.01


def test_hand_returns_after_release(push_6n):
    assert window(push_6n.ticks, 5.0, 6.0)["deviation.left"].max() < 0.01
    assert push_6n.ticks["lambda.left"].iloc[-1] == 1.0


def test_blend_reaches_floors_during_contact(push_6n):
    faded = window(push_6n.ticks, 1.5, 2.0)
    assert (faded["blend.torso_1_joint"] == 0.6).all()
    assert (faded["blend.torso_2_joint"] == 0.6).all()
    for i in range(1, 8):
        assert (faded[f"blend.arm_left_{i}_joint"] == 0.0).all()
    before = window(push_6n.ticks, 1.0, 1.495)
    assert (before["blend.torso_1_joint"] > 0.6).all()


def test_under_threshold_push_keeps_impedance(short_trial):
    log = run_trial(short_trial("NS", duration=3.0, partner=constant_push([4, 0, 0])))
    assert (log.ticks["over.left"] == 0).all()
    assert (log.ticks["lambda.left"] == 1.0).all()
    assert (log.ticks["blend.torso_1_joint"] == 1.0).all()


def test_hand_displacement_signal(short_trial):
    ticks = run_trial(short_trial("HD")).ticks
    for hand in HANDS:
        offsets = np.linalg.norm(ticks[[f"offset.{hand}.{a}" for a in "xyz"]].to_numpy(), axis=1)
        assert offsets.max() == pytest.approx(0.05, abs=1e-9)
        assert ticks[f"deviation.{hand}"].max() >= 0.04


def test_torso_rotation_keeps_hands_in_place(short_trial):
    ticks = run_trial(short_trial("TR")).ticks
    assert ticks["torso_yaw_offset"].abs().max() == pytest.approx(0.2, abs=1e-9)
    for hand in HANDS:
        assert ticks[f"deviation.{hand}"].max() < 0.02


def test_haptic_wrench_mid_step(short_trial):
    ticks = run_trial(short_trial("HW", duration=1.0)).ticks
    row = ticks[np.isclose(ticks["t"], 0.5)].iloc[0]
    assert row["applied.left.fx"] == pytest.approx(1.5)
    assert row["applied.right.fx"] == 0.0


def test_push_away_latches_stop(push_away):
    ticks = push_away.ticks
    deflection = np.maximum(hand_error(ticks, "left"), hand_error(ticks, "right"))
    first = int(np.argmax(deflection > 0.15))
    assert deflection[first] > 0.15
    stop_time = push_away.stop_time
    assert stop_time == pytest.approx(ticks["t"].iloc[first])
    assert 5.0 <= stop_time <= 7.0
    assert ticks["stopped"].iloc[first] == 1
    assert ticks["stopped"].iloc[first - 1] == 0

    assert not [e for e in push_away.events_of("step_onset") if e.time >= stop_time - 1e-9]
    after = ticks.iloc[first:]
    assert after["base_x"].nunique() == 1
    assert after["base_y"].nunique() == 1
    assert (after["applied.left.fx"] == 0.0).all()

    hand = push_away.meta["stop"]["hand"]
    positions = push_away.hand_positions(hand)
    moved = np.linalg.norm(positions[first : first + 100] - positions[first], axis=1).max()
    assert moved > 0.005


def test_stop_tick_carries_no_signals(short_trial):
    partner = {"mode": "push-away", "push_distance": 0.3, "push_direction": [-1, 0, 0], "push_onset": 5.0}
    log = run_trial(short_trial("HW+HD+TR", duration=10.0, partner=partner))
    ticks = log.ticks
    assert log.meta["stop"]["stopped"]
    first = int(np.argmax(ticks["stopped"].to_numpy() == 1))
    assert ticks["t"].iloc[first] == pytest.approx(log.stop_time)
    assert window(ticks, 0.0, log.stop_time)["torso_yaw_offset"].abs().max() > 0.0

    after = ticks.iloc[first:]
    signal_columns = ["torso_yaw_offset"] + [
        f"{kind}.{hand}.{axis}"
        for hand in HANDS
        for kind, axes in (("applied", TASK), ("offset", "xyz"))
        for axis in axes
    ]
    assert (after[signal_columns] == 0.0).all().all()


def test_commanded_joints_respect_velocity_limits(push_away, short_trial, model):
    combined = run_trial(short_trial("HW+HD+TR", partner={"mode": "compliant-follower"}))
    bound = model.velocity_limits * 0.005 + 1e-12
    columns = [f"q_c.{name}" for name in model.joint_names]
    for log in (combined, push_away):
        q_c = np.vstack([model.hold, log.ticks[columns].to_numpy()])
        assert np.all(np.abs(np.diff(q_c, axis=0)) <= bound)


def test_audio_events_lead_each_step(short_trial):
    log = run_trial(short_trial("SC+SD", partner={"mode": "compliant-follower"}))
    spoken = log.events_of("utterance")
    assert len(spoken) == 12
    assert spoken[0].time == pytest.approx(-0.3)
    assert [e.payload["text"] for e in spoken[:2]] == ["One", "Step back"]
    times = [e.time for e in log.events]
    assert times == sorted(times)


def test_same_seed_same_bytes(short_trial, tmp_path):
    config = short_trial("SC+HW", duration=2.0, seed=7, partner={"mode": "compliant-follower", "noise": 0.5})
    first = write_trial_log(run_trial(config), tmp_path / "a")
    second = write_trial_log(run_trial(config), tmp_path / "b")
    for kind in ("ticks", "events", "meta"):
        with open(first[kind], "rb") as a, open(second[kind], "rb") as b:
            assert a.read() == b.read()

    other = run_trial(config.model_copy(update={"seed": 8}))
    with open(first["ticks"], "rb") as a:
        assert other.ticks.to_csv(index=False, float_format="%.12g").encode() != a.read()
