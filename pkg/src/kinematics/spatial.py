from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np
import numpy.typing as npt
from scipy.spatial.transform import Rotation

Vector = npt.NDArray[np.float64]
Matrix = npt.NDArray[np.float64]


def _frozen(values: npt.ArrayLike, size: int | tuple) -> Vector:
    arr = np.array(values, dtype=float).reshape(size)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Pose:
    """Hand frame in the base frame; orientation is an (x, y, z, w) unit quaternion.

    The rotation matrix is kept alongside the quaternion so pose errors never
    convert back and forth.
    """

    position: Vector
    orientation: Vector
    rotation: Matrix = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.rotation is None:
            object.__setattr__(self, "rotation", _frozen(Rotation.from_quat(self.orientation).as_matrix(), (3, 3)))

    @classmethod
    def from_matrix(cls, position: npt.ArrayLike, rotation: npt.ArrayLike) -> "Pose":
        matrix = _frozen(rotation, (3, 3))
        return cls(_frozen(position, 3), _frozen(Rotation.from_matrix(matrix).as_quat(), 4), matrix)

    @classmethod
    def identity(cls) -> "Pose":
        return cls(_frozen(np.zeros(3), 3), _frozen([0.0, 0.0, 0.0, 1.0], 4), _frozen(np.eye(3), (3, 3)))

    def translated(self, offset: npt.ArrayLike) -> "Pose":
        return Pose(_frozen(self.position + np.asarray(offset, dtype=float), 3), self.orientation, self.rotation)


def poses_from_matrices(positions: npt.ArrayLike, rotations: npt.ArrayLike) -> List[Pose]:
    """Several poses with one quaternion conversion."""
    positions = np.asarray(positions, dtype=float).reshape(-1, 3)
    rotations = np.asarray(rotations, dtype=float).reshape(-1, 3, 3)
    quats = Rotation.from_matrix(rotations).as_quat().reshape(-1, 4)
    return [Pose(_frozen(p, 3), _frozen(qt, 4), _frozen(r, (3, 3))) for p, qt, r in zip(positions, quats, rotations)]


@dataclass(frozen=True, eq=False)
class Twist:
    linear: Vector
    angular: Vector

    @classmethod
    def from_vector(cls, values: npt.ArrayLike) -> "Twist":
        arr = np.asarray(values, dtype=float)
        return cls(_frozen(arr[:3], 3), _frozen(arr[3:6], 3))

    @classmethod
    def zero(cls) -> "Twist":
        return cls.from_vector(np.zeros(6))

    @property
    def vector(self) -> Vector:
        return np.concatenate([self.linear, self.angular])


@dataclass(frozen=True, eq=False)
class Wrench:
    force: Vector
    moment: Vector

    @classmethod
    def from_vector(cls, values: npt.ArrayLike) -> "Wrench":
        arr = np.asarray(values, dtype=float)
        return cls(_frozen(arr[:3], 3), _frozen(arr[3:6], 3))

    @classmethod
    def from_force(cls, force: npt.ArrayLike) -> "Wrench":
        return cls(_frozen(force, 3), _frozen(np.zeros(3), 3))

    @classmethod
    def zero(cls) -> "Wrench":
        return cls.from_vector(np.zeros(6))

    @property
    def vector(self) -> Vector:
        return np.concatenate([self.force, self.moment])

    def __add__(self, other: "Wrench") -> "Wrench":
        return Wrench.from_vector(self.vector + other.vector)


def pose_difference(current: Pose, desired: Pose) -> Vector:
    """Pose error: position subtraction and the log map of the relative rotation.

    The rotation part is expressed in the base frame, so it lines up with the
    angular rows of the geometric Jacobian.
    """
    return pose_differences([current], [desired])[0]


def pose_differences(current: Sequence[Pose], desired: Sequence[Pose]) -> npt.NDArray[np.float64]:
    """Row-wise ``pose_difference`` for paired poses, one rotation-vector conversion."""
    if not current:
        return np.empty((0, 6))
    relative = np.stack([c.rotation @ d.rotation.T for c, d in zip(current, desired)])
    positions = np.stack([c.position - d.position for c, d in zip(current, desired)])
    rotvecs = Rotation.from_matrix(relative).as_rotvec().reshape(-1, 3)
    return np.hstack([positions, rotvecs])
