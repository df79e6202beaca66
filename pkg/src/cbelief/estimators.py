"""Belief models: signed estimates in [-1, 1] of a configuration being free.

Negative beliefs predict collision-free, positive predict in-collision, and
the magnitude encodes confidence.  Every strategy evaluates the same weighted
average of neighbor collision states (-1 free / +1 obs); they differ in how
neighbors are selected and weighted:

  nn            k nearest neighbors, inverse-distance weights
  ann           approximate k nearest (best-first, budgeted), same weights
  gaussian      all neighbors within radius r, exp(-d^2/sigma^2) weights
  epanechnikov  all neighbors within radius r, 0.75 (1 - d^2/r^2) weights
  topo          vertices of the simplex containing the query's 4D projection,
                inverse-distance weights in the projected spaces, combined
                (ratio * bel1 + bel2) / (ratio + 1)

Covariance-based measures search in whitened coordinates so the index tree's
Euclidean geometry matches the metric; the weighted-mahalanobis form is not a
metric at all (it can go negative and is clamped), so it is evaluated by a
full linear scan instead of a tree.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from .arm import ArmSpec
from .dataset import TrainingSet
from .delaunay import Tessellation, tessellate
from .kdtree import KdTree
from .similarity import MEASURES, Covariance, training_weights

STRATEGIES = ("nn", "ann", "gaussian", "epanechnikov", "topo")

JITTER_SCALE = 1e-9
JITTER_SEED_TAG = 0x5EED


@dataclass(frozen=True)
class ModelConfig:
    strategy: str = "nn"
    measure: str = "euclidean"
    k: int = 10
    epsilon: float = 0.5
    radius: float = 1.5
    combination_ratio: float = 100.0

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; choose from {STRATEGIES}")
        if self.measure not in MEASURES:
            raise ValueError(f"unknown measure {self.measure!r}; choose from {MEASURES}")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")
        if self.radius <= 0:
            raise ValueError("radius must be > 0")
        if self.combination_ratio <= 0:
            raise ValueError("combination ratio must be > 0")

    @property
    def param(self) -> float:
        """The strategy's swept parameter: k, r, or the combination ratio."""
        if self.strategy in ("nn", "ann"):
            return float(self.k)
        if self.strategy in ("gaussian", "epanechnikov"):
            return float(self.radius)
        return float(self.combination_ratio)

    def to_text(self) -> str:
        return "".join(
            f"{key} = {getattr(self, key)}\n"
            for key in ("strategy", "measure", "k", "epsilon", "radius",
                        "combination_ratio")
        )

    @classmethod
    def from_text(cls, text: str) -> "ModelConfig":
        kwargs = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key in ("strategy", "measure"):
                kwargs[key] = value
            elif key == "k":
                kwargs[key] = int(value)
            elif key in ("epsilon", "radius", "combination_ratio"):
                kwargs[key] = float(value)
            else:
                raise ValueError(f"unknown model config key {key!r}")
        return cls(**kwargs)


def belief_weighted_average(states: np.ndarray, weights: np.ndarray) -> float:
    """Convex combination of collision states; the core belief formula."""
    states = np.asarray(states, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if states.size == 0:
        raise ValueError("belief needs at least one neighbor")
    if np.any(weights < 0.0):
        raise ValueError("neighbor weights must be non-negative")
    total = float(weights.sum())
    if total == 0.0:
        raise ValueError("neighbor weights sum to zero")
    return float((weights * states).sum() / total)


def _deterministic_jitter(n: int, scales: np.ndarray) -> np.ndarray:
    """Per-sample jitter seeded from the sample index; breaks cospherical ties."""
    out = np.empty((n, scales.size))
    for i in range(n):
        rng = np.random.default_rng([i, JITTER_SEED_TAG])
        out[i] = rng.uniform(-1.0, 1.0, size=scales.size) * scales
    return out


class _ProjectedSpace:
    """One projection (4D or 3D) with its covariance and sliced weights."""

    def __init__(self, coords: np.ndarray, measure: str,
                 omegas: np.ndarray | None):
        self.coords = coords
        self.measure = measure
        self.omegas = omegas
        self.covariance = (
            Covariance.from_samples(coords)
            if measure in ("mahalanobis", "weighted-mahalanobis")
            else None
        )
        self.clamp_events = 0

    def sims(self, vertex_ids, q: np.ndarray) -> np.ndarray:
        diffs = self.coords[vertex_ids] - q
        if self.measure == "euclidean":
            quad = (diffs * diffs).sum(axis=1)
        elif self.measure == "weighted-euclidean":
            quad = (diffs * diffs * self.omegas[vertex_ids]).sum(axis=1)
        elif self.measure == "mahalanobis":
            quad = (diffs * (diffs @ self.covariance.inverse)).sum(axis=1)
        else:
            quad = (diffs * self.omegas[vertex_ids] *
                    (diffs @ self.covariance.inverse)).sum(axis=1)
            neg = quad < 0.0
            self.clamp_events += int(neg.sum())
            quad = np.where(neg, 0.0, quad)
        return np.sqrt(quad)


class TopoModel:
    """Tessellation of the shoulder/elbow projection plus a wrist-space correction.

    Queries outside the projected hull get belief 0.0 (no information).  The
    simplex containing the projected query supplies the neighbor set for both
    projected beliefs.
    """

    def __init__(self, samples: np.ndarray, states: np.ndarray, measure: str,
                 ranges: np.ndarray, omegas: np.ndarray | None = None,
                 combination_ratio: float = 100.0):
        if measure in ("weighted-euclidean", "weighted-mahalanobis") and omegas is None:
            raise ValueError("weighted measures need per-sample importance weights")
        self.states = np.asarray(states, dtype=float)
        self.ratio = float(combination_ratio)
        proj4 = samples[:, :4]
        proj3 = samples[:, 4:]
        jitter = _deterministic_jitter(len(samples), JITTER_SCALE * ranges[:4])
        self.tessellation: Tessellation = tessellate(proj4 + jitter)
        self._vertex_tree = KdTree(self.tessellation.points)
        self.space4 = _ProjectedSpace(
            proj4, measure, None if omegas is None else omegas[:, :4])
        self.space3 = _ProjectedSpace(
            proj3, measure, None if omegas is None else omegas[:, 4:])

    @property
    def clamp_events(self) -> int:
        return self.space4.clamp_events + self.space3.clamp_events

    def _space_belief(self, space: _ProjectedSpace, vertex_ids, q: np.ndarray) -> float:
        sims = space.sims(vertex_ids, q)
        zero = np.flatnonzero(sims == 0.0)
        if zero.size:
            # inverse-distance weight undefined; lowest sample index wins
            first = zero[np.argmin(np.asarray(vertex_ids)[zero])]
            return float(self.states[vertex_ids[first]])
        return belief_weighted_average(self.states[vertex_ids], 1.0 / sims)

    def belief(self, q: np.ndarray) -> float:
        q = np.asarray(q, dtype=float)
        q4 = q[:4]
        near_vertex = int(self._vertex_tree.knn(q4, 1)[0][0])
        sid = self.tessellation.locate(
            q4, start=self.tessellation.vertex_hint(near_vertex))
        if sid is None:
            return 0.0
        vertex_ids = list(self.tessellation.simplex_vertices(sid))
        bel1 = self._space_belief(self.space4, vertex_ids, q4)
        bel2 = self._space_belief(self.space3, vertex_ids, q[4:])
        return (self.ratio * bel1 + bel2) / (self.ratio + 1.0)


class BeliefModel:
    """A queryable estimator built from a training set, per a ModelConfig."""

    def __init__(self, training: TrainingSet, arm: ArmSpec, config: ModelConfig):
        self.config = config
        self.samples = training.all_samples()
        self.states = training.states()
        n = len(self.samples)
        measure = config.measure

        self.omegas = None
        if measure in ("weighted-euclidean", "weighted-mahalanobis"):
            self.omegas = (
                training.weights if training.weights is not None
                else training_weights(arm, training)
            )

        self.covariance = None
        if measure in ("mahalanobis", "weighted-mahalanobis") or \
                config.strategy == "gaussian":
            self.covariance = Covariance.from_samples(self.samples)

        self.clamp_events = 0
        self.topo: TopoModel | None = None
        self.tree: KdTree | None = None
        self._space_points = None

        if config.strategy == "topo":
            self.topo = TopoModel(
                self.samples, self.states, measure, arm.ranges,
                omegas=self.omegas, combination_ratio=config.combination_ratio)
            return

        if measure == "euclidean":
            self._space_points = self.samples
            self.tree = KdTree(self._space_points)
        elif measure == "weighted-euclidean":
            self._space_points = self.samples
            self.tree = KdTree(self._space_points, weights=self.omegas)
        elif measure == "mahalanobis":
            self._space_points = self.samples @ self.covariance.whitener
            self.tree = KdTree(self._space_points)
        # weighted-mahalanobis: indefinite quadratic form, linear scan only

        if config.strategy == "gaussian":
            if measure == "weighted-mahalanobis":
                space_samples = self.samples
            else:
                space_samples = self._space_points
            self.sigma2 = Covariance.from_samples(space_samples).mean_variance()

    # -- neighbor machinery -------------------------------------------------

    def _query_point(self, q: np.ndarray) -> np.ndarray:
        if self.config.measure == "mahalanobis":
            return q @ self.covariance.whitener
        return q

    def _scan_d2(self, q: np.ndarray) -> np.ndarray:
        """Squared weighted-mahalanobis sims, clamped at zero where negative."""
        diffs = self.samples - q
        quad = (diffs * self.omegas * (diffs @ self.covariance.inverse)).sum(axis=1)
        neg = quad < 0.0
        self.clamp_events += int(neg.sum())
        return np.where(neg, 0.0, quad)

    def neighbors(self, q: np.ndarray):
        """(indices, sims) of the neighbors this model's strategy selects."""
        q = np.asarray(q, dtype=float)
        cfg = self.config
        if cfg.strategy == "topo":
            raise ValueError("the topological strategy has no flat neighbor list")
        if cfg.measure == "weighted-mahalanobis":
            d2 = self._scan_d2(q)
            order = np.lexsort((np.arange(len(d2)), d2))
            if cfg.strategy in ("nn", "ann"):
                idx = order[: cfg.k]
                return idx, np.sqrt(d2[idx])
            inside = order[d2[order] < cfg.radius**2]
            return inside, np.sqrt(d2[inside])
        sq = self._query_point(q)
        if cfg.strategy == "nn":
            idx, d2 = self.tree.knn(sq, min(cfg.k, len(self.samples)))
        elif cfg.strategy == "ann":
            idx, d2 = self.tree.knn_approx(sq, min(cfg.k, len(self.samples)),
                                           cfg.epsilon)
        else:
            idx, d2 = self.tree.radius(sq, cfg.radius)
        return idx, np.sqrt(np.maximum(d2, 0.0))

    # -- belief -----------------------------------------------------------------

    def belief(self, q: np.ndarray) -> float:
        q = np.asarray(q, dtype=float)
        if self.config.strategy == "topo":
            return self.topo.belief(q)
        idx, sims = self.neighbors(q)
        if len(idx) == 0:
            return 0.0  # empty radius: no information, neutral belief
        if sims[0] == 0.0:
            # inverse-distance weight undefined at zero similarity; the
            # (distance, index) ordering puts the lowest such sample first
            return float(self.states[idx[0]])
        if self.config.strategy in ("nn", "ann"):
            weights = 1.0 / sims
        elif self.config.strategy == "epanechnikov":
            weights = 0.75 * (1.0 - sims**2 / self.config.radius**2)
        else:
            weights = np.exp(-(sims**2) / self.sigma2)
        return belief_weighted_average(self.states[idx], weights)

    def beliefs(self, queries: np.ndarray) -> np.ndarray:
        return np.array([self.belief(q) for q in np.asarray(queries, dtype=float)])


def build_model(training: TrainingSet, arm: ArmSpec, config: ModelConfig):
    """Construct a model and measure its build time in milliseconds."""
    t0 = time.perf_counter()
    model = BeliefModel(training, arm, config)
    return model, (time.perf_counter() - t0) * 1e3
