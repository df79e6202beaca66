"""Serial-arm description and forward kinematics.

Joints and links follow the convention that link 0 is the fixed base, joint j
connects link j and link j+1, and link j+1 is the capsule spanning the origins
of joints j and j+1.  Actuating joint j therefore moves links j+1 and beyond.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Capsule


@dataclass(frozen=True)
class ArmSpec:
    """Geometry and limits of a serial revolute arm.

    axes[j]    unit rotation axis of joint j in its parent frame
    offsets[j] fixed translation from joint j to joint j+1 (meters)
    radii[j]   capsule radius of link j+1 (meters)
    lower/upper joint limits (radians)
    """

    axes: np.ndarray
    offsets: np.ndarray
    radii: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        axes = np.asarray(self.axes, dtype=float)
        offsets = np.asarray(self.offsets, dtype=float)
        radii = np.asarray(self.radii, dtype=float)
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        n = axes.shape[0]
        if axes.shape != (n, 3) or offsets.shape != (n, 3):
            raise ValueError("axes and offsets must be (n, 3) arrays")
        if radii.shape != (n,) or lower.shape != (n,) or upper.shape != (n,):
            raise ValueError("radii and limits must have one entry per joint")
        norms = np.linalg.norm(axes, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ValueError("joint axes must be unit vectors (within 1e-12)")
        if np.any(radii <= 0.0):
            raise ValueError("capsule radii must be positive")
        if np.any(lower >= upper):
            raise ValueError("each lower limit must be below its upper limit")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def joint_count(self) -> int:
        return self.axes.shape[0]

    @property
    def ranges(self) -> np.ndarray:
        return self.upper - self.lower

    def validate_config(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if q.shape != (self.joint_count,):
            raise ValueError(
                f"configuration has {q.shape} entries, arm has {self.joint_count} joints"
            )
        if not np.all(np.isfinite(q)):
            raise ValueError("configuration entries must be finite")
        return q


def rotation_about_axis(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix for a unit axis."""
    x, y, z = axis
    c = np.cos(angle)
    s = np.sin(angle)
    t = 1.0 - c
    return np.array(
        [
            [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
            [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
            [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
        ]
    )


def link_frames(arm: ArmSpec, q: np.ndarray):
    """World pose (rotation, proximal origin) of each moving link 1..n."""
    q = arm.validate_config(q)
    frames = []
    rot = np.eye(3)
    origin = np.zeros(3)
    for j in range(arm.joint_count):
        rot = rot @ rotation_about_axis(arm.axes[j], q[j])
        frames.append((rot, origin.copy()))
        origin = origin + rot @ arm.offsets[j]
    return frames


def forward_kinematics(arm: ArmSpec, q: np.ndarray):
    """Link capsules and end-effector position for configuration ``q``.

    Returns (capsules, ee) where capsules[i] is moving link i+1; consecutive
    capsules share an endpoint exactly (chain continuity).
    """
    frames = link_frames(arm, q)
    capsules = []
    for j, (rot, origin) in enumerate(frames):
        distal = origin + rot @ arm.offsets[j]
        capsules.append(Capsule(origin, distal, float(arm.radii[j])))
    ee = capsules[-1].b
    return capsules, ee


def end_effector(arm: ArmSpec, q: np.ndarray) -> np.ndarray:
    _, ee = forward_kinematics(arm, q)
    return ee


def attached_point_position(arm: ArmSpec, q: np.ndarray, link_index: int,
                            local: np.ndarray) -> np.ndarray:
    """World position of a point rigidly attached to moving link ``link_index``."""
    frames = link_frames(arm, q)
    rot, origin = frames[link_index - 1]
    return origin + rot @ local


def point_to_link_local(arm: ArmSpec, q: np.ndarray, link_index: int,
                        world_point: np.ndarray) -> np.ndarray:
    """Express a world point in the frame of moving link ``link_index``."""
    frames = link_frames(arm, q)
    rot, origin = frames[link_index - 1]
    return rot.T @ (np.asarray(world_point, dtype=float) - origin)


def planar_2r_arm(l1: float = 1.0, l2: float = 1.0, radius: float = 0.05) -> ArmSpec:
    """Two-joint planar arm in the xy-plane, used widely in tests."""
    return ArmSpec(
        axes=np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 1.0]]),
        offsets=np.array([[l1, 0.0, 0.0], [l2, 0.0, 0.0]]),
        radii=np.array([radius, radius]),
        lower=np.array([-np.pi, -np.pi]),
        upper=np.array([np.pi, np.pi]),
    )


def default_arm() -> ArmSpec:
    """The seven-joint arm shipped with the package scenes.

    Alternating roll/pitch axes, generous shoulder/elbow ranges, and a short
    limited-range wrist carrying a bulky gripper capsule.  The gripper is the
    widest body on the arm, so environment contact is usually led by the hand,
    and the hand's position is governed mostly by the first four joints.
    """
    return ArmSpec(
        axes=np.array(
            [
                [0.0, 0.0, 1.0],
                [0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0],
                [0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0],
                [0.0, 1.0, 0.0],
                [0.0, 1.0, 0.0],
            ]
        ),
        offsets=np.array(
            [
                [0.0, 0.0, 0.22],
                [0.0, 0.0, 0.30],
                [0.0, 0.0, 0.26],
                [0.0, 0.0, 0.24],
                [0.0, 0.0, 0.18],
                [0.0, 0.0, 0.15],
                [0.0, 0.0, 0.07],
            ]
        ),
        radii=np.array([0.070, 0.065, 0.060, 0.050, 0.035, 0.035, 0.100]),
        lower=np.array([-2.6, -2.0, -2.8, -0.9, -1.0, -0.9, -0.9]),
        upper=np.array([2.6, 2.0, 2.8, 3.1, 1.0, 0.9, 0.9]),
    )
