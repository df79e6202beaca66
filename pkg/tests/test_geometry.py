import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from cbelief.geometry import (
    Box,
    Capsule,
    Sphere,
    capsule_primitive_clearance,
    capsule_primitive_overlap_interval,
    point_segment_distance,
    segment_box_distance,
    segment_segment_distance,
)

coords = st.floats(-5.0, 5.0)


def vec(x, y, z):
    return np.array([x, y, z], dtype=float)


def test_point_segment_basics():
    assert point_segment_distance(vec(0, 1, 0), vec(-1, 0, 0), vec(1, 0, 0)) == 1.0
    assert point_segment_distance(vec(3, 0, 0), vec(-1, 0, 0), vec(1, 0, 0)) == 2.0
    # degenerate segment
    assert point_segment_distance(vec(0, 3, 4), vec(0, 0, 0), vec(0, 0, 0)) == 5.0


def test_segment_segment_known_cases():
    # crossing skew segments at height 1
    d = segment_segment_distance(vec(-1, 0, 0), vec(1, 0, 0), vec(0, -1, 1), vec(0, 1, 1))
    assert abs(d - 1.0) < 1e-14
    # parallel
    d = segment_segment_distance(vec(0, 0, 0), vec(1, 0, 0), vec(0, 2, 0), vec(1, 2, 0))
    assert abs(d - 2.0) < 1e-14
    # collinear, disjoint
    d = segment_segment_distance(vec(0, 0, 0), vec(1, 0, 0), vec(3, 0, 0), vec(4, 0, 0))
    assert abs(d - 2.0) < 1e-14


@settings(max_examples=200)
@given(*[coords] * 12)
def test_segment_segment_matches_sampling(ax, ay, az, bx, by, bz, cx, cy, cz, dx, dy, dz):
    a, b = vec(ax, ay, az), vec(bx, by, bz)
    c, d = vec(cx, cy, cz), vec(dx, dy, dz)
    exact = segment_segment_distance(a, b, c, d)
    ts = np.linspace(0, 1, 60)
    p1 = a + np.outer(ts, b - a)
    p2 = c + np.outer(ts, d - c)
    sampled = np.linalg.norm(p1[:, None, :] - p2[None, :, :], axis=2).min()
    assert exact <= sampled + 1e-12
    # sampling overshoots by at most the segment discretization step
    step = (np.linalg.norm(b - a) + np.linalg.norm(d - c)) / 59
    assert sampled - exact <= step


@settings(max_examples=200)
@given(*[coords] * 6, st.floats(0.1, 3.0), st.floats(0.1, 3.0), st.floats(0.1, 3.0))
def test_segment_box_matches_sampling(ax, ay, az, bx, by, bz, w, h, depth):
    a, b = vec(ax, ay, az), vec(bx, by, bz)
    box = Box(vec(-w, -h, -depth), vec(w, h, depth))
    exact = segment_box_distance(a, b, box)
    ts = np.linspace(0, 1, 200)
    pts = a + np.outer(ts, b - a)
    lo_gap = np.maximum(box.lo - pts, 0.0)
    hi_gap = np.maximum(pts - box.hi, 0.0)
    sampled = np.linalg.norm(lo_gap + hi_gap, axis=1).min()
    assert exact <= sampled + 1e-12
    assert sampled - exact <= np.linalg.norm(b - a) / 199 + 1e-12


def test_overlap_interval_sphere():
    cap = Capsule(vec(-2, 0, 0), vec(2, 0, 0), 0.1)
    sph = Sphere(vec(0, 0, 0), 0.9)
    t0, t1 = capsule_primitive_overlap_interval(cap, sph)
    # |x| <= 1.0 -> t in [0.25, 0.75]
    assert abs(t0 - 0.25) < 1e-12
    assert abs(t1 - 0.75) < 1e-12


def test_overlap_interval_box():
    cap = Capsule(vec(-2, 0, 0), vec(2, 0, 0), 0.25)
    box = Box(vec(-0.5, -0.5, -0.5), vec(0.5, 0.5, 0.5))
    t0, t1 = capsule_primitive_overlap_interval(cap, box)
    # within 0.25 of the box: |x| <= 0.75 -> t in [0.3125, 0.6875]
    assert abs(t0 - 0.3125) < 1e-12
    assert abs(t1 - 0.6875) < 1e-12


@settings(max_examples=150)
@given(*[coords] * 6, st.floats(0.05, 1.0), st.floats(0.2, 2.0))
def test_interval_consistent_with_clearance(ax, ay, az, bx, by, bz, r, sr):
    cap = Capsule(vec(ax, ay, az), vec(bx, by, bz), r)
    sph = Sphere(vec(0.3, -0.2, 0.1), sr)
    interval = capsule_primitive_overlap_interval(cap, sph)
    clearance = capsule_primitive_clearance(cap, sph)
    if clearance < -1e-12:
        assert interval is not None
        t0, t1 = interval
        assert 0.0 <= t0 <= t1 <= 1.0
        mid = cap.a + 0.5 * (t0 + t1) * (cap.b - cap.a)
        # midpoint of the penetrating sub-segment is inside the inflated sphere
        assert np.linalg.norm(mid - sph.center) <= sph.radius + cap.radius + 1e-9
    elif clearance > 1e-12:
        assert interval is None
