"""Closed-form distance tests between capsules, spheres, and axis-aligned boxes.

Capsules are segments with a radius; all clearance tests reduce to exact
point/segment/box distance computations, so collision decisions are
deterministic and free of mesh discretization error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Capsule:
    """Segment from ``a`` to ``b`` inflated by ``radius``."""

    a: np.ndarray
    b: np.ndarray
    radius: float


@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float


@dataclass(frozen=True)
class Box:
    """Axis-aligned box with componentwise ``lo < hi``."""

    lo: np.ndarray
    hi: np.ndarray


Primitive = Sphere | Box


def point_segment_distance(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    d = b - a
    dd = float(d @ d)
    if dd == 0.0:
        return float(np.linalg.norm(p - a))
    t = float((p - a) @ d) / dd
    t = min(1.0, max(0.0, t))
    return float(np.linalg.norm(a + t * d - p))


def segment_segment_distance(p1, q1, p2, q2) -> float:
    """Minimum distance between segments p1-q1 and p2-q2 (Ericson's method)."""
    d1 = q1 - p1
    d2 = q2 - p2
    r = p1 - p2
    a = float(d1 @ d1)
    e = float(d2 @ d2)
    f = float(d2 @ r)
    if a == 0.0 and e == 0.0:
        return float(np.linalg.norm(r))
    if a == 0.0:
        s = 0.0
        t = min(1.0, max(0.0, f / e))
    else:
        c = float(d1 @ r)
        if e == 0.0:
            t = 0.0
            s = min(1.0, max(0.0, -c / a))
        else:
            b = float(d1 @ d2)
            denom = a * e - b * b
            if denom != 0.0:
                s = min(1.0, max(0.0, (b * f - c * e) / denom))
            else:
                s = 0.0
            t = b * s + f
            if t < 0.0:
                t = 0.0
                s = min(1.0, max(0.0, -c / a))
            elif t > e:
                t = 1.0
                s = min(1.0, max(0.0, (b - c) / a))
            else:
                t = t / e
    closest1 = p1 + s * d1
    closest2 = p2 + t * d2
    return float(np.linalg.norm(closest1 - closest2))


def segment_box_distance(a: np.ndarray, b: np.ndarray, box: Box) -> float:
    """Exact minimum distance from segment a-b to an axis-aligned box.

    The squared distance along the segment is piecewise quadratic; pieces are
    delimited by the parameters where the segment crosses the box's slab
    planes, so the global minimum is found by minimizing each quadratic piece
    in closed form.
    """
    best = math.inf
    for t0, t1, qa, qb, qc in _box_pieces(a, b, box):
        best = min(best, _quad_min_on(qa, qb, qc, t0, t1))
    return math.sqrt(max(best, 0.0))


def segment_box_overlap_interval(a, b, box: Box, inflate: float):
    """Sub-interval [t0, t1] of the segment within distance ``inflate`` of the box.

    Returns None when the segment never comes that close.  The sublevel set of
    a convex distance function is a single interval, so two roots suffice.
    """
    thresh = inflate * inflate
    lo = None
    hi = None
    for t0, t1, qa, qb, qc in _box_pieces(a, b, box):
        r = _quad_sublevel(qa, qb, qc - thresh, t0, t1)
        if r is None:
            continue
        if lo is None:
            lo, hi = r
        else:
            lo = min(lo, r[0])
            hi = max(hi, r[1])
    if lo is None:
        return None
    return lo, hi


def segment_sphere_overlap_interval(a, b, sphere: Sphere, inflate: float):
    """Sub-interval of the segment within ``inflate`` of the sphere center."""
    d = b - a
    m = a - sphere.center
    qa = float(d @ d)
    qb = 2.0 * float(m @ d)
    qc = float(m @ m) - inflate * inflate
    return _quad_sublevel(qa, qb, qc, 0.0, 1.0)


def _box_pieces(a, b, box: Box):
    """Yield (t0, t1, qa, qb, qc) quadratic pieces of squared distance to box."""
    d = b - a
    cuts = {0.0, 1.0}
    for i in range(3):
        if d[i] != 0.0:
            for plane in (box.lo[i], box.hi[i]):
                t = (plane - a[i]) / d[i]
                if 0.0 < t < 1.0:
                    cuts.add(float(t))
    ts = sorted(cuts)
    for t0, t1 in zip(ts[:-1], ts[1:]):
        tm = 0.5 * (t0 + t1)
        qa = qb = qc = 0.0
        for i in range(3):
            pm = a[i] + tm * d[i]
            if pm < box.lo[i]:
                # contribution (lo - a_i - t d_i)^2
                c0 = box.lo[i] - a[i]
                qa += d[i] * d[i]
                qb += -2.0 * c0 * d[i]
                qc += c0 * c0
            elif pm > box.hi[i]:
                c0 = a[i] - box.hi[i]
                qa += d[i] * d[i]
                qb += 2.0 * c0 * d[i]
                qc += c0 * c0
        yield t0, t1, qa, qb, qc


def _quad_min_on(qa, qb, qc, t0, t1) -> float:
    v0 = qa * t0 * t0 + qb * t0 + qc
    v1 = qa * t1 * t1 + qb * t1 + qc
    best = min(v0, v1)
    if qa > 0.0:
        tv = -qb / (2.0 * qa)
        if t0 < tv < t1:
            best = min(best, qa * tv * tv + qb * tv + qc)
    return best


def _quad_sublevel(qa, qb, qc, t0, t1):
    """Interval within [t0, t1] where qa t^2 + qb t + qc <= 0, or None."""
    if qa == 0.0:
        if qb == 0.0:
            return (t0, t1) if qc <= 0.0 else None
        root = -qc / qb
        if qb > 0.0:
            lo, hi = t0, min(t1, root)
        else:
            lo, hi = max(t0, root), t1
        return (lo, hi) if lo <= hi else None
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return None
    s = math.sqrt(disc)
    r0 = (-qb - s) / (2.0 * qa)
    r1 = (-qb + s) / (2.0 * qa)
    lo = max(t0, min(r0, r1))
    hi = min(t1, max(r0, r1))
    return (lo, hi) if lo <= hi else None


def capsule_primitive_clearance(cap: Capsule, prim: Primitive) -> float:
    """Signed clearance: negative means the capsule overlaps the primitive."""
    if isinstance(prim, Sphere):
        d = point_segment_distance(prim.center, cap.a, cap.b)
        return d - cap.radius - prim.radius
    d = segment_box_distance(cap.a, cap.b, prim)
    return d - cap.radius


def capsule_primitive_overlap_interval(cap: Capsule, prim: Primitive):
    """Axis-parameter interval of the capsule penetrating the inflated primitive."""
    if isinstance(prim, Sphere):
        return segment_sphere_overlap_interval(
            cap.a, cap.b, prim, cap.radius + prim.radius
        )
    return segment_box_overlap_interval(cap.a, cap.b, prim, cap.radius)


def capsules_overlap(c1: Capsule, c2: Capsule) -> bool:
    d = segment_segment_distance(c1.a, c1.b, c2.a, c2.b)
    return d < c1.radius + c2.radius
