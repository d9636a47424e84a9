import pytest

from kinematics.loader import default_model, load_model
from models.errors import ConfigurationError
from pipeline.paths import DEFAULT_MODEL_PATH


def test_default_model_is_cached():
    assert default_model(DEFAULT_MODEL_PATH) is default_model(DEFAULT_MODEL_PATH)


def test_bad_axis_is_rejected(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text(
        "torso_joint_count: null\narm_joint_count: null\n"
        "arms:\n  left:\n    frame: tip\n    joints:\n"
        "      - {name: j, axis: [0, 0, 2], limits: [-1, 1], velocity_limit: 1}\n"
    )
    with pytest.raises(ConfigurationError, match="unit norm"):
        load_model(path)


def test_missing_model_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_model(tmp_path / "nope.yaml")


def test_wrong_joint_count(tmp_path):
    path = tmp_path / "short.yaml"
    path.write_text(
        "arms:\n  left:\n    frame: tip\n    joints:\n"
        "      - {name: j, axis: [0, 0, 1], limits: [-1, 1], velocity_limit: 1}\n"
    )
    with pytest.raises(ConfigurationError, match="torso joints"):
        load_model(path)
