"""Balanced training sets of collision-checked configurations.

Sobol points are drawn (index 1 upward), mapped into the joint limits, and
collision checked.  Self-colliding samples are discarded; the loop runs until
both classes hold N/2 samples, then each list is truncated to its first N/2
entries, which makes smaller runs exact prefixes of larger ones.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .arm import ArmSpec
from .sobol import SobolGenerator, transform_to_cspace
from .world import CollisionReport, CollisionState, World, collision_check

GENERATION_BUDGET_FACTOR = 1000

CSV_HEADER = ["j0", "j1", "j2", "j3", "j4", "j5", "j6", "state", "link_index",
              "cx", "cy", "cz"]
WEIGHT_COLUMNS = ["w0", "w1", "w2", "w3", "w4", "w5", "w6"]


class GenerationBudgetExceeded(RuntimeError):
    """Raised when a scene is too lopsided to balance within the check budget."""


@dataclass(frozen=True)
class TrainingSet:
    """Equal-sized free and in-collision sample lists with parallel reports."""

    free_samples: np.ndarray            # (N/2, d)
    obs_samples: np.ndarray             # (N/2, d)
    reports: tuple[CollisionReport, ...]  # parallel to obs_samples
    weights: np.ndarray | None = None   # (N, d) importance weights, optional

    def __post_init__(self):
        if len(self.free_samples) != len(self.obs_samples):
            raise ValueError("free and obs sample counts must be equal")
        if len(self.reports) != len(self.obs_samples):
            raise ValueError("reports must be parallel to obs samples")

    @property
    def n_total(self) -> int:
        return len(self.free_samples) + len(self.obs_samples)

    def all_samples(self) -> np.ndarray:
        """Free samples first, then obs samples; order is the model input order."""
        return np.vstack([self.free_samples, self.obs_samples])

    def states(self) -> np.ndarray:
        """-1 for free, +1 for in-collision, aligned with all_samples()."""
        half = len(self.free_samples)
        return np.concatenate([-np.ones(half), np.ones(half)])


def generate_training_set(world: World, arm: ArmSpec, n: int,
                          start_index: int = 1) -> TrainingSet:
    """Draw Sobol samples until both classes hold n/2 members."""
    if n < 2 or n % 2 != 0:
        raise ValueError("training set size must be an even number >= 2")
    half = n // 2
    budget = GENERATION_BUDGET_FACTOR * n
    gen = SobolGenerator(arm.joint_count, start_index=start_index)
    free: list[np.ndarray] = []
    obs: list[np.ndarray] = []
    reports: list[CollisionReport] = []
    checks = 0
    while len(free) < half or len(obs) < half:
        if checks >= budget:
            raise GenerationBudgetExceeded(
                f"needed {half}+{half} samples but only found "
                f"{len(free)} free / {len(obs)} obs in {budget} collision checks"
            )
        sample = transform_to_cspace(gen.next_point(), arm)
        outcome = collision_check(world, arm, sample)
        checks += 1
        if outcome.state is CollisionState.FREE:
            free.append(sample)
        elif outcome.state is CollisionState.OBS:
            obs.append(sample)
            reports.append(outcome.report)
        # self-collision samples are discarded
    return TrainingSet(
        free_samples=np.array(free[:half]),
        obs_samples=np.array(obs[:half]),
        reports=tuple(reports[:half]),
    )


def _fmt(x: float) -> str:
    return repr(float(x))


def training_set_to_csv(ts: TrainingSet) -> str:
    """Columnar text form; floats use repr so values round-trip exactly."""
    buf = io.StringIO()
    header = list(CSV_HEADER)
    if ts.weights is not None:
        header += WEIGHT_COLUMNS
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    half = len(ts.free_samples)
    for i, q in enumerate(ts.free_samples):
        row = [_fmt(v) for v in q] + ["free", "", "", "", ""]
        if ts.weights is not None:
            row += [_fmt(v) for v in ts.weights[i]]
        writer.writerow(row)
    for i, (q, rep) in enumerate(zip(ts.obs_samples, ts.reports)):
        row = [_fmt(v) for v in q] + ["obs", str(rep.first_link_index)]
        row += [_fmt(v) for v in rep.centroid]
        if ts.weights is not None:
            row += [_fmt(v) for v in ts.weights[half + i]]
        writer.writerow(row)
    return buf.getvalue()


def training_set_from_csv(text: str) -> TrainingSet:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header[: len(CSV_HEADER)] != CSV_HEADER:
        raise ValueError("dataset file does not match the expected column layout")
    has_weights = header[len(CSV_HEADER):] == WEIGHT_COLUMNS
    if not has_weights and len(header) != len(CSV_HEADER):
        raise ValueError("unexpected trailing columns in dataset file")
    free, obs, reports = [], [], []
    wfree, wobs = [], []
    for row in reader:
        q = np.array([float(v) for v in row[:7]])
        state = row[7]
        if state == "free":
            free.append(q)
            if has_weights:
                wfree.append([float(v) for v in row[12:19]])
        elif state == "obs":
            obs.append(q)
            reports.append(
                CollisionReport(int(row[8]), np.array([float(v) for v in row[9:12]]))
            )
            if has_weights:
                wobs.append([float(v) for v in row[12:19]])
        else:
            raise ValueError(f"unknown state {state!r} in dataset file")
    weights = np.array(wfree + wobs) if has_weights else None
    return TrainingSet(np.array(free), np.array(obs), tuple(reports), weights)
