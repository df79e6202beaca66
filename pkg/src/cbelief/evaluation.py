"""Ground-truth query sets, accuracy / average-error metrics, and parameter sweeps.

Queries are uniform pseudorandom (seeded) rather than quasi-random so the test
point set does not share structured voids with the Sobol training set.  A
prediction is the sign of the belief; a belief of exactly zero encodes "no
information" and is scored incorrect for both classes.
"""

from __future__ import annotations

import io
import csv
import time
from dataclasses import dataclass

import numpy as np

from .arm import ArmSpec
from .dataset import GENERATION_BUDGET_FACTOR, TrainingSet, generate_training_set
from .estimators import ModelConfig, build_model
from .world import CollisionState, World, collision_check

SWEEP_CSV_HEADER = ["scene", "strategy", "measure", "N", "param", "seed",
                    "accuracy", "avg_error", "build_ms", "query_us"]


@dataclass(frozen=True)
class QuerySet:
    """Seeded uniform configurations with oracle ground truth (+1 obs, -1 free)."""

    configs: np.ndarray
    states: np.ndarray
    scene: str
    seed: int

    def __len__(self) -> int:
        return len(self.configs)


@dataclass(frozen=True)
class EvalResult:
    accuracy: float
    avg_error: float
    n_queries: int
    accuracy_free: float
    accuracy_obs: float
    n_free: int
    n_obs: int
    build_ms: float = 0.0
    query_us: float = 0.0


def generate_query_set(world: World, arm: ArmSpec, m: int, seed: int) -> QuerySet:
    """Draw m uniform configurations, redrawing self-collisions, with truth labels."""
    if m < 1:
        raise ValueError("query count must be >= 1")
    rng = np.random.default_rng(seed)
    budget = GENERATION_BUDGET_FACTOR * m
    configs = []
    states = []
    draws = 0
    while len(configs) < m:
        if draws >= budget:
            raise RuntimeError(
                f"redraw budget exhausted: {len(configs)}/{m} queries "
                f"after {budget} draws (scene almost surely self-colliding)"
            )
        q = rng.uniform(arm.lower, arm.upper)
        draws += 1
        outcome = collision_check(world, arm, q)
        if outcome.state is CollisionState.SELF_COLLISION:
            continue
        configs.append(q)
        states.append(1.0 if outcome.state is CollisionState.OBS else -1.0)
    return QuerySet(np.array(configs), np.array(states), world.name, seed)


def evaluate(model, query_set: QuerySet, build_ms: float = 0.0) -> EvalResult:
    """Accuracy is the correctly-signed fraction; average error the mean
    absolute deviation between true state and belief."""
    if len(query_set) == 0:
        raise ValueError("query set is empty")
    t0 = time.perf_counter()
    beliefs = model.beliefs(query_set.configs)
    query_us = (time.perf_counter() - t0) * 1e6 / len(query_set)
    truth = query_set.states
    correct = np.sign(beliefs) == truth  # sign(0) = 0 never matches +-1
    accuracy = float(correct.mean())
    avg_error = float(np.abs(truth - beliefs).mean())
    free = truth < 0
    obs = ~free
    return EvalResult(
        accuracy=accuracy,
        avg_error=avg_error,
        n_queries=len(query_set),
        accuracy_free=float(correct[free].mean()) if free.any() else float("nan"),
        accuracy_obs=float(correct[obs].mean()) if obs.any() else float("nan"),
        n_free=int(free.sum()),
        n_obs=int(obs.sum()),
        build_ms=build_ms,
        query_us=query_us,
    )


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepCell:
    scene: str
    config: ModelConfig
    n_train: int
    m_queries: int
    seed: int


@dataclass(frozen=True)
class SweepRow:
    cell: SweepCell
    result: EvalResult | None
    error: str | None = None


def make_grid(scenes, strategies, measures, n_grid, param_grid, seeds,
              m_queries: int, base: ModelConfig = ModelConfig()) -> list[SweepCell]:
    """Full cross product; ``param`` binds to k for nn/ann and r for kernels."""
    cells = []
    for scene in scenes:
        for strategy in strategies:
            for measure in measures:
                for n in n_grid:
                    for param in param_grid:
                        cfg = _with_param(base, strategy, measure, param)
                        for seed in seeds:
                            cells.append(SweepCell(scene, cfg, n, m_queries, seed))
    return cells


def _with_param(base: ModelConfig, strategy: str, measure: str, param) -> ModelConfig:
    from dataclasses import replace

    if strategy in ("nn", "ann"):
        return replace(base, strategy=strategy, measure=measure, k=int(param))
    if strategy in ("gaussian", "epanechnikov"):
        return replace(base, strategy=strategy, measure=measure, radius=float(param))
    return replace(base, strategy=strategy, measure=measure,
                   combination_ratio=float(param))


def run_cell(cell: SweepCell, load_scene_fn, cache: dict | None = None) -> SweepRow:
    """Evaluate one sweep cell; failures become flagged rows, not aborts.

    The optional cache deduplicates training sets, built models, and query
    sets across cells that share them (models and datasets are deterministic,
    so caching cannot change any result).
    """
    try:
        world, arm = load_scene_fn(cell.scene)
        tkey = ("train", cell.scene, cell.n_train)
        if cache is not None and tkey in cache:
            training = cache[tkey]
        else:
            training = generate_training_set(world, arm, cell.n_train)
            if cache is not None:
                cache[tkey] = training
        mkey = ("model", cell.scene, cell.n_train, cell.config)
        if cache is not None and mkey in cache:
            model, build_ms = cache[mkey]
        else:
            model, build_ms = build_model(training, arm, cell.config)
            if cache is not None:
                cache[mkey] = (model, build_ms)
        qkey = ("queries", cell.scene, cell.m_queries, cell.seed)
        if cache is not None and qkey in cache:
            queries = cache[qkey]
        else:
            queries = generate_query_set(world, arm, cell.m_queries, cell.seed)
            if cache is not None:
                cache[qkey] = queries
        result = evaluate(model, queries, build_ms=build_ms)
        return SweepRow(cell, result)
    except Exception as exc:  # noqa: BLE001 - flagged row carries the reason
        return SweepRow(cell, None, error=f"{type(exc).__name__}: {exc}")


def sweep(cells: list[SweepCell], load_scene_fn, jobs: int = 1) -> list[SweepRow]:
    """Run all cells; output order follows the grid regardless of scheduling."""
    if jobs <= 1:
        cache: dict = {}
        return [run_cell(cell, load_scene_fn, cache) for cell in cells]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(run_cell, cell, load_scene_fn) for cell in cells]
        return [f.result() for f in futures]


def _fmt(x: float) -> str:
    return repr(float(x))


def rows_to_csv(rows: list[SweepRow], include_timing: bool = False) -> str:
    """Stable CSV of sweep results.

    Timing columns are zeroed unless requested: wall-clock values would break
    the byte-identical-rerun guarantee every other column upholds.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_CSV_HEADER)
    for row in rows:
        cfg = row.cell.config
        out = [row.cell.scene, cfg.strategy, cfg.measure, str(row.cell.n_train),
               _fmt(cfg.param), str(row.cell.seed)]
        if row.result is None:
            out += ["nan", "nan", "0.0", "0.0"]
        else:
            out += [_fmt(row.result.accuracy), _fmt(row.result.avg_error)]
            if include_timing:
                out += [_fmt(round(row.result.build_ms, 3)),
                        _fmt(round(row.result.query_us, 3))]
            else:
                out += ["0.0", "0.0"]
        writer.writerow(out)
    return buf.getvalue()
