"""Independent reference implementations used as oracles by the tests.

These deliberately avoid the library's own code paths: brute-force scans,
dense sampling, and hand-rolled formulas that a reviewer can check on paper.
"""

import numpy as np

from cbelief.geometry import Box, Sphere


def brute_force_knn(points, q, k, weights=None):
    """(indices, squared distances) of the k nearest by (d2, index) order."""
    diffs = points - q
    if weights is None:
        d2 = (diffs * diffs).sum(axis=1)
    else:
        d2 = (diffs * diffs * weights).sum(axis=1)
    order = np.lexsort((np.arange(len(points)), d2))[:k]
    return order, d2[order]


def brute_force_radius(points, q, r, weights=None):
    diffs = points - q
    if weights is None:
        d2 = (diffs * diffs).sum(axis=1)
    else:
        d2 = (diffs * diffs * weights).sum(axis=1)
    order = np.lexsort((np.arange(len(points)), d2))
    inside = order[d2[order] < r * r]
    return inside, d2[inside]


def planar_2r_end_effector(l1, l2, q):
    """Closed-form end effector of a planar two-link arm."""
    x = l1 * np.cos(q[0]) + l2 * np.cos(q[0] + q[1])
    y = l1 * np.sin(q[0]) + l2 * np.sin(q[0] + q[1])
    return np.array([x, y, 0.0])


def van_der_corput(n: int) -> float:
    """Base-2 radical inverse of n."""
    result = 0.0
    denom = 1.0
    while n:
        denom *= 2.0
        result += (n & 1) / denom
        n >>= 1
    return result


def sampled_collision_state(world, arm, q, samples_per_link=500):
    """Dense point-sampling collision oracle.

    Each capsule axis is discretized into ``samples_per_link`` points tested
    as spheres against every primitive; self collision likewise uses sampled
    points against the exact point-segment distance.  Returns (state string,
    margin) where margin is the sampled minimum clearance across all pairs
    (how far the decision sits from a surface contact at this resolution).
    """
    from cbelief.arm import forward_kinematics

    capsules, _ = forward_kinematics(arm, q)
    ts = np.linspace(0.0, 1.0, samples_per_link)
    pts = [cap.a + np.outer(ts, cap.b - cap.a) for cap in capsules]

    margin = np.inf
    self_hit = False
    for i in range(len(capsules)):
        for j in range(i + 2, len(capsules)):
            d = _points_to_segment(pts[i], capsules[j].a, capsules[j].b)
            clearance = d.min() - capsules[i].radius - capsules[j].radius
            margin = min(margin, abs(clearance))
            if clearance < 0.0:
                self_hit = True
    if self_hit:
        return "self", margin

    first_link = None
    for link_idx, (cap, p) in enumerate(zip(capsules, pts), start=1):
        for prim in world.obstacles:
            if isinstance(prim, Sphere):
                d = np.linalg.norm(p - prim.center, axis=1) - prim.radius
            else:
                lo_gap = np.maximum(prim.lo - p, 0.0)
                hi_gap = np.maximum(p - prim.hi, 0.0)
                d = np.linalg.norm(lo_gap + hi_gap, axis=1)
            clearance = d.min() - cap.radius
            margin = min(margin, abs(clearance))
            if clearance < 0.0 and first_link is None:
                first_link = link_idx
        if first_link is not None:
            break
    if first_link is not None:
        return "obs", margin
    return "free", margin


def _points_to_segment(points, a, b):
    d = b - a
    dd = float(d @ d)
    if dd == 0.0:
        return np.linalg.norm(points - a, axis=1)
    t = np.clip((points - a) @ d / dd, 0.0, 1.0)
    closest = a + np.outer(t, d)
    return np.linalg.norm(points - closest, axis=1)


def insphere_audit(tess):
    """Verify the empty-circumsphere property for every vertex/simplex pair.

    A vectorized circumcenter screen flags near-boundary pairs, which are then
    settled by the exact predicate; returns the number of strict violations.
    """
    from cbelief.predicates import insphere_sign

    pts = tess.points
    vids = np.array(tess.vertex_ids())
    violations = 0
    for sid, verts in tess.finite_simplices():
        p = pts[list(verts)]
        a = 2.0 * (p[1:] - p[0])
        b = (p[1:] ** 2).sum(axis=1) - (p[0] ** 2).sum()
        center = np.linalg.solve(a, b)
        r2 = ((p[0] - center) ** 2).sum()
        d2 = ((pts[vids] - center) ** 2).sum(axis=1)
        band = 1e-7 * max(r2, 1.0)
        for vid in vids[d2 < r2 + band]:
            if vid in verts:
                continue
            if insphere_sign([pts[v] for v in verts], pts[vid]) > 0:
                violations += 1
    return violations


def batch_locate_scan(tess, probes, tol=1e-12):
    """Linear-scan point location for many probes at once.

    Returns, per probe, the lowest simplex id whose barycentric coordinates
    are all >= -tol, or None.
    """
    sids = [sid for sid, _ in tess.finite_simplices()]
    verts = np.array([list(tess.simplex_vertices(s)) for s in sids])
    p0 = tess.points[verts[:, 0]]
    mats = np.transpose(tess.points[verts[:, 1:]] - p0[:, None, :], (0, 2, 1))
    invs = np.linalg.inv(mats)
    out = []
    for p in probes:
        lam = np.einsum("sij,sj->si", invs, p - p0)
        lam0 = 1.0 - lam.sum(axis=1)
        ok = (lam.min(axis=1) >= -tol) & (lam0 >= -tol)
        hits = np.flatnonzero(ok)
        out.append(int(sids[hits[0]]) if hits.size else None)
    return out
