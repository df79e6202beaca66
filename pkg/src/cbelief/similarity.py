"""Similarity measures between configurations and per-joint importance weights.

A joint's importance weight scores its ability to displace a reference point
under a +0.01 rad perturbation: the end effector for free samples, the
collision centroid (rigidly attached to the first colliding link) for
in-collision samples.  Joints at or beyond the colliding link cannot change
the collision state, so their weights are exactly zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .arm import (
    ArmSpec,
    attached_point_position,
    end_effector,
    point_to_link_local,
)
from .dataset import TrainingSet
from .world import CollisionReport

PERTURBATION_RAD = 0.01

MEASURES = ("euclidean", "weighted-euclidean", "mahalanobis", "weighted-mahalanobis")


class DegenerateWeightsError(ValueError):
    """No joint perturbation displaces the reference point."""


@dataclass(frozen=True)
class ImportanceWeights:
    """Unit-norm, non-negative per-joint weights."""

    omega: np.ndarray

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        object.__setattr__(self, "omega", omega)

    def as_matrix_diagonal(self) -> np.ndarray:
        return self.omega.copy()


@dataclass(frozen=True)
class WeightMatrix:
    """Diagonal weighting matrix built from a sample's importance weights."""

    diagonal: np.ndarray

    @classmethod
    def from_weights(cls, w: ImportanceWeights) -> "WeightMatrix":
        return cls(diagonal=w.omega.copy())

    def as_matrix(self) -> np.ndarray:
        return np.diag(self.diagonal)


def _normalize(s: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(s))
    if norm == 0.0:
        raise DegenerateWeightsError(
            "all joint perturbations leave the reference point fixed"
        )
    return s / norm


def importance_weights_free(arm: ArmSpec, q: np.ndarray,
                            step: float = PERTURBATION_RAD) -> ImportanceWeights:
    """Per-joint end-effector displacement under +step rad, normalized."""
    q = arm.validate_config(q)
    base = end_effector(arm, q)
    s = np.empty(arm.joint_count)
    for j in range(arm.joint_count):
        qp = q.copy()
        qp[j] += step
        s[j] = np.linalg.norm(end_effector(arm, qp) - base)
    return ImportanceWeights(_normalize(s))


def importance_weights_obs(arm: ArmSpec, q: np.ndarray, report: CollisionReport,
                           step: float = PERTURBATION_RAD) -> ImportanceWeights:
    """Displacement of the collision centroid for joints ahead of the hit link.

    The centroid rides rigidly on link ``report.first_link_index``; joints at
    index >= that link leave it (and the collision) unchanged, so their
    entries are exactly zero.
    """
    q = arm.validate_config(q)
    l = report.first_link_index
    if not 1 <= l <= arm.joint_count:
        raise ValueError(f"link index {l} outside [1, {arm.joint_count}]")
    local = point_to_link_local(arm, q, l, report.centroid)
    base = attached_point_position(arm, q, l, local)
    s = np.zeros(arm.joint_count)
    for j in range(l):
        qp = q.copy()
        qp[j] += step
        s[j] = np.linalg.norm(attached_point_position(arm, qp, l, local) - base)
    try:
        return ImportanceWeights(_normalize(s))
    except DegenerateWeightsError:
        raise DegenerateWeightsError(
            f"centroid on link {l} sits on every upstream joint axis at q={q!r}"
        ) from None


def training_weights(arm: ArmSpec, ts: TrainingSet) -> np.ndarray:
    """Importance weights for every training sample, free rows first."""
    rows = [importance_weights_free(arm, q).omega for q in ts.free_samples]
    rows += [
        importance_weights_obs(arm, q, rep).omega
        for q, rep in zip(ts.obs_samples, ts.reports)
    ]
    return np.array(rows)


@dataclass(frozen=True)
class Covariance:
    """Ridge-regularized sample covariance with cached inverse and whitener."""

    sigma: np.ndarray
    inverse: np.ndarray = field(repr=False, default=None)
    whitener: np.ndarray = field(repr=False, default=None)

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "Covariance":
        samples = np.asarray(samples, dtype=float)
        n, d = samples.shape
        if n < d + 1:
            raise ValueError(f"need more than {d} samples to estimate covariance")
        sigma = np.cov(samples, rowvar=False)
        lam = 1e-8 * float(np.trace(sigma)) / d
        if lam <= 0.0:
            lam = 1e-12  # keeps degenerate (e.g. constant) data invertible
        sigma = sigma + lam * np.eye(d)
        inverse = np.linalg.inv(sigma)
        evals, evecs = np.linalg.eigh(sigma)
        whitener = evecs @ np.diag(1.0 / np.sqrt(evals)) @ evecs.T
        return cls(sigma=sigma, inverse=inverse, whitener=whitener)

    @property
    def dim(self) -> int:
        return self.sigma.shape[0]

    def mean_variance(self) -> float:
        return float(np.mean(np.diag(self.sigma)))


@dataclass(frozen=True)
class SimilarityMeasure:
    """One of the four configuration-distance definitions.

    Weighted forms take the diagonal weight matrix of the *training* sample,
    never the query, which makes them intentionally asymmetric.
    """

    kind: str
    covariance: Covariance | None = None

    def __post_init__(self):
        if self.kind not in MEASURES:
            raise ValueError(f"unknown measure {self.kind!r}; choose from {MEASURES}")
        if self.needs_covariance and self.covariance is None:
            raise ValueError(f"measure {self.kind!r} requires a covariance context")

    @property
    def weighted(self) -> bool:
        return self.kind in ("weighted-euclidean", "weighted-mahalanobis")

    @property
    def needs_covariance(self) -> bool:
        return self.kind in ("mahalanobis", "weighted-mahalanobis")


def similarity(measure: SimilarityMeasure, q: np.ndarray, qprime: np.ndarray,
               weight_diag: np.ndarray | None = None) -> float:
    """Distance between training sample ``q`` and query ``qprime``.

    The weighted-mahalanobis quadratic form W @ inv(Sigma) is not symmetric
    and can go negative; it is clamped at zero before the square root and the
    clamp is counted in ``similarity.clamp_events``.
    """
    if measure.weighted:
        if weight_diag is None:
            raise ValueError(f"measure {measure.kind!r} requires the sample's weights")
    elif weight_diag is not None:
        raise ValueError(f"measure {measure.kind!r} does not take weights")
    v = np.asarray(q, dtype=float) - np.asarray(qprime, dtype=float)
    if measure.kind == "euclidean":
        quad = float(v @ v)
    elif measure.kind == "weighted-euclidean":
        quad = float((v * weight_diag) @ v)
    elif measure.kind == "mahalanobis":
        quad = float(v @ measure.covariance.inverse @ v)
    else:  # weighted-mahalanobis, taken literally
        quad = float((v * weight_diag) @ (measure.covariance.inverse @ v))
        if quad < 0.0:
            similarity.clamp_events += 1
            quad = 0.0
    return float(np.sqrt(quad))


similarity.clamp_events = 0
