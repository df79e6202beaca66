"""Regenerate the committed benchmark CSVs under results/.

Three sweeps mirror the benchmark protocol:
  trend_sweep.csv    five strategies vs training size N (euclidean measure)
  measure_sweep.csv  four similarity measures for NN(k=10) vs N, clutter scene
  param_sweep.csv    k sweep for NN and r sweep for the kernels at fixed N

All seeds are fixed, so reruns reproduce the files byte for byte.  Takes
roughly 20 minutes single-threaded; pass --quick for a tiny smoke variant.
"""

import argparse
import sys
import time
from pathlib import Path

from cbelief.estimators import ModelConfig
from cbelief.evaluation import SweepCell, rows_to_csv, sweep
from cbelief.world import load_scene

SEEDS = (101, 211, 307, 401, 503)
M_QUERIES = 2000
SCENES = ("shelf", "table", "clutter")


def cells_trend(n_grid):
    cells = []
    for scene in SCENES:
        for strategy in ("nn", "ann", "epanechnikov", "gaussian", "topo"):
            for n in n_grid:
                for seed in SEEDS:
                    cells.append(SweepCell(
                        scene, ModelConfig(strategy, "euclidean", k=10, radius=1.5),
                        n, M_QUERIES, seed))
    return cells


def cells_measures(n_grid):
    cells = []
    for measure in ("euclidean", "weighted-euclidean", "mahalanobis",
                    "weighted-mahalanobis"):
        for n in n_grid:
            for seed in SEEDS:
                cells.append(SweepCell(
                    "clutter", ModelConfig("nn", measure, k=10), n, M_QUERIES, seed))
    return cells


def cells_params(n_fixed):
    cells = []
    for k in (1, 5, 10, 20, 50):
        for seed in SEEDS:
            cells.append(SweepCell(
                "clutter", ModelConfig("nn", "euclidean", k=k), n_fixed,
                M_QUERIES, seed))
    for r in (0.75, 1.0, 1.5, 2.0, 2.5):
        for seed in SEEDS:
            cells.append(SweepCell(
                "clutter", ModelConfig("epanechnikov", "euclidean", radius=r),
                n_fixed, M_QUERIES, seed))
    return cells


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results")
    parser.add_argument("--quick", action="store_true",
                        help="small N grid for a fast smoke run")
    args = parser.parse_args(argv)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    n_grid = (200, 500) if args.quick else (500, 2000, 8000)
    n_fixed = 500 if args.quick else 2000

    for name, cells in (
        ("trend_sweep", cells_trend(n_grid)),
        ("measure_sweep", cells_measures(n_grid)),
        ("param_sweep", cells_params(n_fixed)),
    ):
        t0 = time.time()
        rows = sweep(cells, load_scene)
        path = out_dir / f"{name}.csv"
        path.write_text(rows_to_csv(rows))
        failures = sum(1 for r in rows if r.error is not None)
        print(f"{path}: {len(rows)} rows, {failures} failures, "
              f"{time.time() - t0:.0f}s", flush=True)
        if failures:
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
