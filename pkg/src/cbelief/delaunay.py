"""Incremental Delaunay tessellation in 2 to 4 dimensions.

Bowyer-Watson insertion with exact conflict predicates.  The convex hull is
bounded by cells through a symbolic vertex at infinity rather than a scaled
super-simplex, so hull-adjacent simplices satisfy the empty-circumsphere
property exactly and no cleanup pass can distort them.

Conflict tests run through a cached circumcenter filter; anything within the
filter's error band is settled by the exact lifted-determinant predicate.

Simplices are addressed by integer id; dead ids are recycled.  Vertex ids are
the indices of the input points, which lets callers keep side tables (samples,
states, weights) aligned with tessellation vertices.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .predicates import insphere_sign, orientation_sign

INF = -1  # symbolic vertex closing the hull

LOCATE_TOL = 1e-12


class DegenerateInputError(ValueError):
    """Input points do not span the space (no initial simplex exists)."""


class Tessellation:
    def __init__(self, points: np.ndarray):
        points = np.asarray(points, dtype=float)
        if points.ndim != 2:
            raise ValueError("points must be an (n, d) array")
        self.points = points
        self.dim = points.shape[1]
        if self.dim not in (2, 3, 4):
            raise ValueError("tessellation supports 2, 3, or 4 dimensions")
        n, d = points.shape
        if n < d + 1:
            raise DegenerateInputError(f"need at least {d + 1} points in {d}D")
        self._pts = [tuple(map(float, p)) for p in points]
        self._verts: list[tuple[int, ...] | None] = []
        self._nbrs: list[list[int] | None] = []
        self._orient: list[int] = []
        self._free: list[int] = []
        self._ccache: dict[int, tuple] = {}
        self._side_int: dict[int, int] = {}
        self._vertex_simplex = [-1] * n
        self._coord_to_vertex: dict[tuple, int] = {}
        self._duplicate_of: dict[int, int] = {}
        self._last = 0
        self._build()

    # -- storage helpers -----------------------------------------------------

    def _new_simplex(self, verts: tuple[int, ...], nbrs: list[int]) -> int:
        if INF in verts:
            orient = 0
        else:
            orient = orientation_sign([self._pts[v] for v in verts])
            if orient == 0:
                raise DegenerateInputError(
                    f"flat simplex {verts}: points are degenerate beyond "
                    "what jitter resolves"
                )
        if self._free:
            sid = self._free.pop()
            self._verts[sid] = verts
            self._nbrs[sid] = nbrs
            self._orient[sid] = orient
        else:
            sid = len(self._verts)
            self._verts.append(verts)
            self._nbrs.append(nbrs)
            self._orient.append(orient)
        for v in verts:
            if v != INF:
                self._vertex_simplex[v] = sid
        self._last = sid
        return sid

    def _kill(self, sid: int) -> None:
        self._verts[sid] = None
        self._nbrs[sid] = None
        self._ccache.pop(sid, None)
        self._side_int.pop(sid, None)
        self._free.append(sid)

    def alive(self, sid: int) -> bool:
        return 0 <= sid < len(self._verts) and self._verts[sid] is not None

    def is_finite(self, sid: int) -> bool:
        return INF not in self._verts[sid]

    def simplex_vertices(self, sid: int) -> tuple[int, ...]:
        return self._verts[sid]

    def simplex_neighbors(self, sid: int) -> tuple[int, ...]:
        return tuple(self._nbrs[sid])

    def live_ids(self, finite_only: bool = True):
        for sid, verts in enumerate(self._verts):
            if verts is None:
                continue
            if finite_only and INF in verts:
                continue
            yield sid

    def finite_simplices(self) -> list[tuple[int, tuple[int, ...]]]:
        return [(sid, self._verts[sid]) for sid in self.live_ids()]

    @property
    def n_finite_simplices(self) -> int:
        return sum(1 for _ in self.live_ids())

    def vertex_ids(self):
        """Vertices actually present (duplicates collapse onto their first copy)."""
        return [i for i in range(len(self._pts)) if i not in self._duplicate_of]

    def canonical_vertex(self, i: int) -> int:
        return self._duplicate_of.get(i, i)

    # -- construction ----------------------------------------------------------

    def _build(self) -> None:
        seed = self._affine_seed()
        d = self.dim
        seed_set = set(seed)
        first = self._new_simplex(tuple(seed), [0] * (d + 1))
        inf_ids = {}
        for v in seed:
            facet = tuple(u for u in seed if u != v)
            inf_ids[v] = self._new_simplex((INF,) + facet, [0] * (d + 1))
        for i, v in enumerate(seed):
            self._nbrs[first][i] = inf_ids[v]
            cell = inf_ids[v]
            for pos, u in enumerate(self._verts[cell]):
                if u == INF:
                    self._nbrs[cell][pos] = first
                else:
                    self._nbrs[cell][pos] = inf_ids[u]
        for vid in range(len(self._pts)):
            self._coord_to_vertex.setdefault(self._pts[vid], vid)
        for vid in range(len(self._pts)):
            if vid in seed_set:
                continue
            self._insert(vid)

    def _affine_seed(self) -> list[int]:
        """First d+1 affinely independent input points, by index order."""
        from fractions import Fraction

        d = self.dim
        chosen: list[int] = []
        basis: list[list[Fraction]] = []  # exact row-echelon basis of differences
        for idx, p in enumerate(self._pts):
            if not chosen:
                chosen.append(idx)
                continue
            row = [
                Fraction(p[j]) - Fraction(self._pts[chosen[0]][j]) for j in range(d)
            ]
            for b in basis:
                lead = next((j for j in range(d) if b[j] != 0), None)
                if lead is not None and row[lead] != 0:
                    factor = row[lead] / b[lead]
                    row = [r - factor * bb for r, bb in zip(row, b)]
            if any(r != 0 for r in row):
                basis.append(row)
                chosen.append(idx)
                if len(chosen) == d + 1:
                    return chosen
        raise DegenerateInputError(
            f"points span only {len(chosen) - 1} of {d} dimensions"
        )

    # -- conflict predicate ------------------------------------------------------

    def _circumdata(self, sid: int):
        """Float circumcenter, squared radius, and an error band for filtering."""
        pts = self.points[list(self._verts[sid])]
        a = 2.0 * (pts[1:] - pts[0])
        b = (pts[1:] ** 2).sum(axis=1) - (pts[0] ** 2).sum()
        center = np.linalg.solve(a, b)
        d2 = ((pts - center) ** 2).sum(axis=1)
        r2 = float(d2[0])
        # vertices sit exactly on the circumsphere, so their float residuals
        # measure the error of (center, r2); pad generously before trusting it
        band = 32.0 * float(np.max(np.abs(d2 - r2))) + 1e-12 * r2
        return tuple(center), r2, band

    def _conflict(self, sid: int, x: tuple) -> bool:
        """Exact: is x strictly inside the circumsphere of simplex sid?"""
        verts = self._verts[sid]
        if INF not in verts:
            cc = self._ccache.get(sid)
            if cc is None:
                cc = self._circumdata(sid)
                self._ccache[sid] = cc
            center, r2, band = cc
            val = -r2
            for xj, cj in zip(x, center):
                dj = xj - cj
                val += dj * dj
            if val < -band:
                return True
            if val > band:
                return False
            return insphere_sign(
                [self._pts[v] for v in verts], x, self._orient[sid]
            ) > 0
        inf_pos = verts.index(INF)
        facet = [self._pts[v] for v in verts if v != INF]
        side_x = orientation_sign(facet + [list(x)])
        if side_x == 0:
            fin = self._nbrs[sid][inf_pos]
            return insphere_sign(
                [self._pts[v] for v in self._verts[fin]], x, self._orient[fin]
            ) > 0
        side_v = self._side_int.get(sid)
        if side_v is None:
            fin = self._nbrs[sid][inf_pos]
            facet_set = set(verts) - {INF}
            v_op = next(u for u in self._verts[fin] if u not in facet_set)
            side_v = orientation_sign(facet + [self._pts[v_op]])
            self._side_int[sid] = side_v
        return side_x != side_v

    def _seed_conflict(self, x: tuple) -> int:
        """Walk from the last-touched simplex to any simplex in conflict with x."""
        sid = self._last if self.alive(self._last) else next(self.live_ids(False))
        d = self.dim
        visited = set()
        while sid not in visited:
            visited.add(sid)
            if self._conflict(sid, x):
                return sid
            verts = self._verts[sid]
            if INF in verts:
                # not in conflict: x is on the hull side, step back inside
                sid = self._nbrs[sid][verts.index(INF)]
                continue
            orient = self._orient[sid]
            nxt = None
            for i, v in enumerate(verts):
                facet = [self._pts[u] for u in verts if u != v]
                facet.append(x)
                side_x = orientation_sign(facet)
                if side_x == 0:
                    continue
                # moving vertex i to the end of the sequence costs d-i swaps
                side_v = orient if (d - i) % 2 == 0 else -orient
                if side_x != side_v:
                    nxt = self._nbrs[sid][i]
                    break
            if nxt is None:
                break  # inside a non-conflicting simplex: degenerate input
            sid = nxt
        for sid in self.live_ids(False):
            if self._conflict(sid, x):
                return sid
        raise RuntimeError("no conflicting simplex found for insertion point")

    def _insert(self, vid: int) -> None:
        x = self._pts[vid]
        owner = self._coord_to_vertex[x]
        if owner != vid:
            self._duplicate_of[vid] = owner
            return
        seed = self._seed_conflict(x)
        cavity = [seed]
        in_cavity = {seed}
        queue = deque([seed])
        while queue:
            sid = queue.popleft()
            for nb in self._nbrs[sid]:
                if nb in in_cavity:
                    continue
                if self._conflict(nb, x):
                    in_cavity.add(nb)
                    cavity.append(nb)
                    queue.append(nb)
        # boundary facets: (facet verts, outside simplex, position inside it)
        boundary = []
        for sid in cavity:
            verts = self._verts[sid]
            for i, nb in enumerate(self._nbrs[sid]):
                if nb in in_cavity:
                    continue
                facet = tuple(verts[j] for j in range(len(verts)) if j != i)
                out_pos = self._nbrs[nb].index(sid)
                boundary.append((facet, nb, out_pos))
        for sid in cavity:
            self._kill(sid)
        facet_map: dict[frozenset, tuple[int, int]] = {}
        for facet, nb_out, out_pos in boundary:
            verts = (vid,) + facet
            nbrs = [-2] * (self.dim + 1)
            nbrs[0] = nb_out
            new_id = self._new_simplex(verts, nbrs)
            self._nbrs[nb_out][out_pos] = new_id
            for j, u in enumerate(facet, start=1):
                key = frozenset(facet) - {u}
                other = facet_map.pop(key, None)
                if other is None:
                    facet_map[key] = (new_id, j)
                else:
                    oid, opos = other
                    self._nbrs[new_id][j] = oid
                    self._nbrs[oid][opos] = new_id
        if facet_map:
            raise RuntimeError("cavity boundary did not close up")

    # -- point location ---------------------------------------------------------

    def barycentric(self, sid: int, p) -> np.ndarray | None:
        """Barycentric coordinates of p in a finite simplex (None if singular)."""
        verts = self._verts[sid]
        pts = self.points[list(verts)]
        mat = (pts[1:] - pts[0]).T
        try:
            lam = np.linalg.solve(mat, np.asarray(p, dtype=float) - pts[0])
        except np.linalg.LinAlgError:
            return None
        return np.concatenate([[1.0 - lam.sum()], lam])

    def locate(self, p, start: int | None = None) -> int | None:
        """Finite simplex containing p (all barycentrics >= -1e-12), or None.

        Walks across the facet with the most negative coordinate; stepping
        through a hull facet means p is outside.  Cycles fall back to a
        linear scan.
        """
        p = np.asarray(p, dtype=float)
        sid = start if start is not None and self.alive(start) else None
        if sid is None:
            sid = next(self.live_ids(), None)
            if sid is None:
                return None
        if not self.is_finite(sid):
            verts = self._verts[sid]
            sid = self._nbrs[sid][verts.index(INF)]
        visited = set()
        while sid not in visited:
            visited.add(sid)
            lam = self.barycentric(sid, p)
            if lam is None:
                break
            worst = int(np.argmin(lam))
            if lam[worst] >= -LOCATE_TOL:
                return sid
            nb = self._nbrs[sid][worst]
            if not self.is_finite(nb):
                return None
            sid = nb
        return self._locate_scan(p)

    def _locate_scan(self, p) -> int | None:
        for sid in self.live_ids():
            lam = self.barycentric(sid, p)
            if lam is not None and lam.min() >= -LOCATE_TOL:
                return sid
        return None

    def vertex_hint(self, vid: int) -> int:
        """A live simplex incident (or near) the vertex, for locate warm starts."""
        vid = self.canonical_vertex(vid)
        sid = self._vertex_simplex[vid]
        if self.alive(sid):
            return sid
        return next(self.live_ids(False))

    # -- audits ------------------------------------------------------------------

    def check_adjacency(self) -> None:
        """Raise if neighbor pointers are not mutual or facets are malformed."""
        for sid in self.live_ids(False):
            verts = self._verts[sid]
            for i, nb in enumerate(self._nbrs[sid]):
                if not self.alive(nb):
                    raise AssertionError(f"simplex {sid} points to dead {nb}")
                if sid not in self._nbrs[nb]:
                    raise AssertionError(f"adjacency not symmetric: {sid} -> {nb}")
                shared = set(verts) - {verts[i]}
                if not shared <= set(self._verts[nb]):
                    raise AssertionError(f"facet mismatch between {sid} and {nb}")


def tessellate(points: np.ndarray) -> Tessellation:
    """Delaunay tessellation of the given points (2D, 3D, or 4D)."""
    return Tessellation(points)
