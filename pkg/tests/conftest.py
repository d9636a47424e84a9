import math

import pytest

from kinematics.chain import build_model
from models.config import ArmConfig, JointConfig, ModelConfig, TrialConfig, load_model_config
from pipeline.paths import DEFAULT_MODEL_PATH


@pytest.fixture(scope="session")
def model():
    return build_model(load_model_config(DEFAULT_MODEL_PATH))


def rotor_config(axis=(0.0, 0.0, 1.0), length=1.0, velocity_limit=1.0):
    joint = JointConfig(name="rotor", axis=axis, limits=(-math.pi, math.pi), velocity_limit=velocity_limit)
    return ModelConfig(
        arms={"left": ArmConfig(frame="tip", joints=[joint], hand_offset=(length, 0.0, 0.0))},
        torso_joint_count=None,
        arm_joint_count=None,
    )


@pytest.fixture
def rotor():
    return build_model(rotor_config())


@pytest.fixture(scope="session")
def short_trial():
    """Factory for trial configs on the default model; durations default to one box cycle."""

    def make(signals="NS", duration=6.0, **updates):
        schedule = {"signals": signals, **updates.pop("schedule", {})}
        data = {"schedule": schedule, "duration": duration, "model": DEFAULT_MODEL_PATH, **updates}
        return TrialConfig.model_validate(data)

    return make
