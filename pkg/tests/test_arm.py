import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cbelief.arm import (
    ArmSpec,
    default_arm,
    end_effector,
    forward_kinematics,
    planar_2r_arm,
)

from helpers import planar_2r_end_effector


def test_straight_2r_chain():
    arm = planar_2r_arm(1.0, 1.0)
    _, ee = forward_kinematics(arm, np.zeros(2))
    np.testing.assert_allclose(ee, [2.0, 0.0, 0.0], atol=1e-15)


def test_2r_rigid_rotation():
    arm = planar_2r_arm(1.0, 1.0)
    _, ee = forward_kinematics(arm, np.array([np.pi / 2, 0.0]))
    np.testing.assert_allclose(ee, [0.0, 2.0, 0.0], atol=1e-15)


def test_2r_matches_closed_form():
    arm = planar_2r_arm(1.0, 1.0)
    rng = np.random.default_rng(1)
    for _ in range(50):
        q = rng.uniform(-np.pi, np.pi, 2)
        np.testing.assert_allclose(
            end_effector(arm, q), planar_2r_end_effector(1.0, 1.0, q), atol=1e-12
        )


def _symbolic_fk_oracle(arm, q):
    """Second FK implementation: homogeneous transforms composed with sympy."""
    import sympy as sp

    T = sp.eye(4)
    for j in range(arm.joint_count):
        axis = sp.Matrix(arm.axes[j])
        angle = sp.Float(q[j], 30)
        kx, ky, kz = axis
        K = sp.Matrix([[0, -kz, ky], [kz, 0, -kx], [-ky, kx, 0]])
        R = sp.eye(3) + sp.sin(angle) * K + (1 - sp.cos(angle)) * K * K
        H = sp.eye(4)
        H[:3, :3] = R
        T = T * H
        H = sp.eye(4)
        H[:3, 3] = sp.Matrix(arm.offsets[j])
        T = T * H
    return np.array([float(T[i, 3]) for i in range(3)])


def test_seven_joint_fk_matches_symbolic_oracle():
    arm = default_arm()
    rng = np.random.default_rng(7)
    for _ in range(10):
        q = rng.uniform(arm.lower, arm.upper)
        expected = _symbolic_fk_oracle(arm, q)
        np.testing.assert_allclose(end_effector(arm, q), expected, atol=1e-10)


def test_chain_continuity():
    arm = default_arm()
    rng = np.random.default_rng(3)
    for _ in range(20):
        q = rng.uniform(arm.lower, arm.upper)
        capsules, ee = forward_kinematics(arm, q)
        for prev, nxt in zip(capsules[:-1], capsules[1:]):
            np.testing.assert_array_equal(prev.b, nxt.a)
        np.testing.assert_array_equal(capsules[-1].b, ee)


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1), st.floats(1e-6, 0.5))
def test_end_effector_lipschitz(seed, scale):
    """|EE(q) - EE(q + delta)| <= (sum of link lengths) * |delta|_1."""
    arm = default_arm()
    rng = np.random.default_rng(seed)
    q = rng.uniform(arm.lower, arm.upper)
    delta = rng.uniform(-scale, scale, arm.joint_count)
    total_length = float(np.linalg.norm(arm.offsets, axis=1).sum())
    lhs = np.linalg.norm(end_effector(arm, q) - end_effector(arm, q + delta))
    assert lhs <= total_length * np.abs(delta).sum() + 1e-12


def test_dimension_mismatch_rejected():
    arm = default_arm()
    with pytest.raises(ValueError):
        forward_kinematics(arm, np.zeros(5))
    with pytest.raises(ValueError):
        forward_kinematics(arm, np.full(7, np.nan))


def test_arm_spec_validation():
    good = default_arm()
    with pytest.raises(ValueError):
        ArmSpec(good.axes * 2.0, good.offsets, good.radii, good.lower, good.upper)
    with pytest.raises(ValueError):
        ArmSpec(good.axes, good.offsets, -good.radii, good.lower, good.upper)
    with pytest.raises(ValueError):
        ArmSpec(good.axes, good.offsets, good.radii, good.upper, good.lower)
