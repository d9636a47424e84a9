import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from kinematics.spatial import Pose, Wrench, pose_difference


def test_pose_difference_identity():
    pose = Pose.from_matrix([0.1, 0.2, 0.3], np.eye(3))
    assert not np.any(pose_difference(pose, pose))


def test_pose_difference_rotation_is_log_map():
    desired = Pose.identity()
    current = Pose.from_matrix([0.0, 0.0, 0.05], Rotation.from_rotvec([0.0, 0.0, 0.2]).as_matrix())
    np.testing.assert_allclose(pose_difference(current, desired), [0, 0, 0.05, 0, 0, 0.2], atol=1e-12)


def test_wrench_sum_and_vector():
    total = Wrench.from_force([1.0, 0.0, 0.0]) + Wrench.from_vector([0, 2, 0, 0, 0, 3])
    np.testing.assert_array_equal(total.vector, [1, 2, 0, 0, 0, 3])


def test_spatial_values_are_read_only():
    wrench = Wrench.zero()
    with pytest.raises(ValueError):
        wrench.force[0] = 1.0
