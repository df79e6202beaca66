"""Median-split space-partitioning tree for exact, approximate, and radius queries.

The tree stores points in the metric's ambient coordinates (callers whiten
for covariance-based measures).  Per-sample diagonal weights are supported for
training-sample-weighted distances: leaves score candidates with each sample's
own weights, while subtree pruning uses the componentwise minimum weight over
the subtree, which lower-bounds every weighted distance inside it.

Ties at the k-th neighbor break toward the smaller insertion index, so results
are deterministic and comparable with a linear-scan reference.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

LEAF_SIZE = 16


class KdTree:
    def __init__(self, points: np.ndarray, weights: np.ndarray | None = None,
                 leaf_size: int = LEAF_SIZE):
        points = np.ascontiguousarray(points, dtype=float)
        if points.ndim != 2 or len(points) == 0:
            raise ValueError("points must be a non-empty (n, d) array")
        self.points = points
        self.weights = None if weights is None else np.ascontiguousarray(weights, dtype=float)
        self.n, self.dim = points.shape
        self.leaf_size = leaf_size
        self.perm = np.arange(self.n)
        # node arrays, filled by _build
        self._children: list[tuple[int, int]] = []
        self._slice: list[tuple[int, int]] = []
        self._bbox_lo: list[np.ndarray] = []
        self._bbox_hi: list[np.ndarray] = []
        self._wmin: list[np.ndarray | None] = []
        self._build(0, self.n)
        self.last_visits = 0

    @property
    def n_nodes(self) -> int:
        return len(self._children)

    def _build(self, start: int, end: int) -> int:
        idx = self.perm[start:end]
        pts = self.points[idx]
        node = len(self._children)
        self._children.append((-1, -1))
        self._slice.append((start, end))
        self._bbox_lo.append(pts.min(axis=0))
        self._bbox_hi.append(pts.max(axis=0))
        if self.weights is not None:
            self._wmin.append(self.weights[idx].min(axis=0))
        else:
            self._wmin.append(None)
        if end - start > self.leaf_size:
            extent = self._bbox_hi[node] - self._bbox_lo[node]
            dim = int(np.argmax(extent))
            if extent[dim] > 0.0:
                mid = (end - start) // 2
                order = np.argpartition(pts[:, dim], mid)
                self.perm[start:end] = idx[order]
                left = self._build(start, start + mid)
                right = self._build(start + mid, end)
                self._children[node] = (left, right)
        return node

    # -- bounds ------------------------------------------------------------

    def _bound2(self, node: int, q: np.ndarray) -> float:
        g = np.maximum(self._bbox_lo[node] - q, 0.0)
        g = np.maximum(g, q - self._bbox_hi[node])
        wmin = self._wmin[node]
        if wmin is None:
            return float((g * g).sum())
        return float((g * g * wmin).sum())

    def _leaf_d2(self, node: int, q: np.ndarray):
        start, end = self._slice[node]
        idx = self.perm[start:end]
        diffs = self.points[idx] - q
        if self.weights is None:
            return idx, (diffs * diffs).sum(axis=1)
        return idx, (diffs * diffs * self.weights[idx]).sum(axis=1)

    # -- exact k nearest ----------------------------------------------------

    def knn(self, q: np.ndarray, k: int):
        """Indices and squared distances of the k nearest points, ascending."""
        q = np.asarray(q, dtype=float)
        if not 1 <= k <= self.n:
            raise ValueError(f"k must be in [1, {self.n}]")
        heap: list[tuple[float, float]] = []  # (-d2, -idx), root = current worst
        self.last_visits = 0
        self._knn_recurse(0, q, k, heap)
        out = sorted((-d2, -i) for d2, i in heap)
        idx = np.array([int(i) for _, i in out])
        d2 = np.array([d for d, _ in out])
        return idx, d2

    def _knn_recurse(self, node: int, q: np.ndarray, k: int, heap) -> None:
        self.last_visits += 1
        left, right = self._children[node]
        if left == -1:
            idx, d2 = self._leaf_d2(node, q)
            for i, d in zip(idx, d2):
                cand = (-float(d), -int(i))
                if len(heap) < k:
                    heapq.heappush(heap, cand)
                elif cand > heap[0]:
                    heapq.heapreplace(heap, cand)
            return
        b_left = self._bound2(left, q)
        b_right = self._bound2(right, q)
        order = ((b_left, left), (b_right, right)) if b_left <= b_right \
            else ((b_right, right), (b_left, left))
        for bound, child in order:
            if len(heap) == k and bound > -heap[0][0]:
                continue
            self._knn_recurse(child, q, k, heap)

    # -- approximate k nearest ----------------------------------------------

    def visit_budget(self, eps: float) -> int:
        """Node-visit cap derived from the accuracy slack."""
        if eps < 0.0:
            raise ValueError("eps must be >= 0")
        if eps == 0.0:
            return self.n_nodes
        return max(64, math.ceil(self.n_nodes / (1.0 + eps) ** self.dim))

    def knn_approx(self, q: np.ndarray, k: int, eps: float,
                   budget: int | None = None):
        """Best-first search; each reported distance aims for (1+eps) of truth.

        Subtrees whose bound exceeds (current k-th)/(1+eps) are skipped, and
        the search stops once the node-visit budget runs out.  With eps = 0
        and a full budget this reduces to the exact search.
        """
        q = np.asarray(q, dtype=float)
        if not 1 <= k <= self.n:
            raise ValueError(f"k must be in [1, {self.n}]")
        if budget is None:
            budget = self.visit_budget(eps)
        grow = (1.0 + eps) ** 2
        heap: list[tuple[float, float]] = []
        queue: list[tuple[float, int]] = [(self._bound2(0, q), 0)]
        visits = 0
        while queue and visits < budget:
            bound, node = heapq.heappop(queue)
            if len(heap) == k and bound * grow > -heap[0][0]:
                break  # queue is bound-ordered: nothing better remains
            visits += 1
            left, right = self._children[node]
            if left == -1:
                idx, d2 = self._leaf_d2(node, q)
                for i, d in zip(idx, d2):
                    cand = (-float(d), -int(i))
                    if len(heap) < k:
                        heapq.heappush(heap, cand)
                    elif cand > heap[0]:
                        heapq.heapreplace(heap, cand)
            else:
                heapq.heappush(queue, (self._bound2(left, q), left))
                heapq.heappush(queue, (self._bound2(right, q), right))
        self.last_visits = visits
        out = sorted((-d2, -i) for d2, i in heap)
        idx = np.array([int(i) for _, i in out])
        d2 = np.array([d for d, _ in out])
        return idx, d2

    # -- fixed radius ---------------------------------------------------------

    def radius(self, q: np.ndarray, r: float):
        """All points with distance strictly below r, ascending (d2, index)."""
        q = np.asarray(q, dtype=float)
        if r <= 0.0:
            raise ValueError("radius must be positive")
        r2 = r * r
        found: list[tuple[float, int]] = []
        self.last_visits = 0
        stack = [0]
        while stack:
            node = stack.pop()
            if self._bound2(node, q) >= r2:
                continue
            self.last_visits += 1
            left, right = self._children[node]
            if left == -1:
                idx, d2 = self._leaf_d2(node, q)
                inside = d2 < r2
                found.extend(
                    (float(d), int(i)) for d, i in zip(d2[inside], idx[inside])
                )
            else:
                stack.append(right)
                stack.append(left)
        found.sort()
        idx = np.array([i for _, i in found], dtype=int)
        d2 = np.array([d for d, _ in found])
        return idx, d2
