"""Command-line front end: datasets, evaluations, sweeps, and scene inspection.

All randomness flows from explicit --seed flags; reruns with identical flags
produce byte-identical CSV output.  Timing columns are zeroed unless --timing
is passed, since wall-clock values cannot be reproduced byte-for-byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import evaluation
from .dataset import generate_training_set, training_set_from_csv, training_set_to_csv
from .estimators import STRATEGIES, ModelConfig, build_model
from .similarity import MEASURES, training_weights
from .world import SceneError, load_scene


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def _model_config(args) -> ModelConfig:
    if args.model_config:
        return ModelConfig.from_text(Path(args.model_config).read_text())
    if args.strategy in ("nn", "ann"):
        if args.radius is not None:
            raise ValueError("--radius applies only to kernel strategies")
    elif args.strategy in ("gaussian", "epanechnikov"):
        if args.k is not None:
            raise ValueError("--k applies only to nn/ann strategies")
    elif args.strategy == "topo":
        if args.k is not None or args.radius is not None:
            raise ValueError("topo takes --ratio, not --k or --radius")
    if args.epsilon is not None and args.strategy != "ann":
        raise ValueError("--epsilon applies only to the ann strategy")
    if args.ratio is not None and args.strategy != "topo":
        raise ValueError("--ratio applies only to the topo strategy")
    defaults = ModelConfig()
    return ModelConfig(
        strategy=args.strategy,
        measure=args.measure,
        k=args.k if args.k is not None else defaults.k,
        epsilon=args.epsilon if args.epsilon is not None else defaults.epsilon,
        radius=args.radius if args.radius is not None else defaults.radius,
        combination_ratio=args.ratio if args.ratio is not None else
        defaults.combination_ratio,
    )


def cmd_gen_dataset(args) -> int:
    if args.n % 2 != 0 or args.n < 2:
        return _fail(2, "usage", "--n must be an even number >= 2")
    world, arm = load_scene(args.scene)
    training = generate_training_set(world, arm, args.n)
    if args.with_weights:
        from dataclasses import replace

        training = replace(training, weights=training_weights(arm, training))
    text = training_set_to_csv(training)
    Path(args.out).write_text(text)
    print(f"wrote {args.out}: {len(training.free_samples)} free + "
          f"{len(training.obs_samples)} obs samples"
          + (" (with importance weights)" if args.with_weights else ""))
    return 0


def cmd_eval(args) -> int:
    world, arm = load_scene(args.scene)
    config = _model_config(args)
    if args.dataset:
        training = training_set_from_csv(Path(args.dataset).read_text())
    else:
        training = generate_training_set(world, arm, args.n)
    model, build_ms = build_model(training, arm, config)
    queries = evaluation.generate_query_set(world, arm, args.queries, args.seed)
    result = evaluation.evaluate(model, queries, build_ms=build_ms)
    cell = evaluation.SweepCell(world.name, config, training.n_total,
                                args.queries, args.seed)
    rows = [evaluation.SweepRow(cell, result)]
    csv_text = evaluation.rows_to_csv(rows, include_timing=args.timing)
    print(f"scene={world.name} strategy={config.strategy} measure={config.measure} "
          f"N={training.n_total} accuracy={result.accuracy:.4f} "
          f"avg_error={result.avg_error:.4f}")
    if args.out:
        path = Path(args.out)
        if path.exists() and path.stat().st_size > 0:
            body = csv_text.split("\n", 1)[1]
            with path.open("a") as fh:
                fh.write(body)
        else:
            path.write_text(csv_text)
    return 0


def cmd_sweep(args) -> int:
    strategies = args.strategies.split(",")
    measures = args.measures.split(",")
    scenes = args.scenes.split(",")
    n_grid = [int(v) for v in args.n_grid.split(",")]
    param_grid = [float(v) for v in args.param_grid.split(",")]
    seeds = [int(v) for v in args.seeds.split(",")]
    for s in strategies:
        if s not in STRATEGIES:
            return _fail(2, "usage", f"unknown strategy {s!r}")
    for m in measures:
        if m not in MEASURES:
            return _fail(2, "usage", f"unknown measure {m!r}")
    cells = evaluation.make_grid(scenes, strategies, measures, n_grid,
                                 param_grid, seeds, args.queries)
    rows = evaluation.sweep(cells, load_scene, jobs=args.jobs)
    csv_text = evaluation.rows_to_csv(rows, include_timing=args.timing)
    Path(args.out).write_text(csv_text)
    failures = [r for r in rows if r.error is not None]
    print(f"wrote {args.out}: {len(rows)} cells, {len(failures)} failed")
    if failures:
        for row in failures:
            print(json.dumps({
                "error": "cell", "scene": row.cell.scene,
                "strategy": row.cell.config.strategy, "N": row.cell.n_train,
                "seed": row.cell.seed, "message": row.error,
            }), file=sys.stderr)
        return 1
    return 0


def cmd_scene_info(args) -> int:
    world, arm = load_scene(args.scene)
    print(f"scene: {world.name}")
    print(f"obstacles: {len(world.obstacles)}")
    for i, obs in enumerate(world.obstacles):
        print(f"  [{i}] {type(obs).__name__.lower()}")
    print(f"arm joints: {arm.joint_count}")
    print(f"joint ranges (rad): {[round(float(r), 3) for r in arm.ranges]}")
    if args.probe:
        from .evaluation import generate_query_set

        qs = generate_query_set(world, arm, args.probe, seed=0)
        obs_frac = float((qs.states > 0).mean())
        print(f"probe ({args.probe} uniform configs): "
              f"{obs_frac:.1%} in collision, {1 - obs_frac:.1%} free")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbelief",
        description="Collision-space belief models over sampled collision checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-dataset", help="generate a balanced training set CSV")
    p.add_argument("--scene", required=True, help="shipped scene name or JSON path")
    p.add_argument("--n", type=int, required=True, help="total samples (even)")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--with-weights", action="store_true",
                   help="precompute importance weight columns w0..w6")
    p.set_defaults(fn=cmd_gen_dataset)

    p = sub.add_parser("eval", help="evaluate one model on one scene")
    p.add_argument("--scene", required=True)
    p.add_argument("--strategy", default="nn", choices=STRATEGIES)
    p.add_argument("--measure", default="euclidean", choices=MEASURES)
    p.add_argument("--k", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--radius", type=float)
    p.add_argument("--ratio", type=float, help="topo bel1:bel2 combination ratio")
    p.add_argument("--model-config", help="read strategy/measure/params from file")
    p.add_argument("--n", type=int, default=2000, help="training set size")
    p.add_argument("--dataset", help="use a pre-generated dataset CSV instead")
    p.add_argument("--queries", type=int, default=1000, help="query count M")
    p.add_argument("--seed", type=int, default=0, help="query-set seed")
    p.add_argument("--out", help="append the result row to this CSV")
    p.add_argument("--timing", action="store_true",
                   help="record wall-clock timing columns (breaks byte determinism)")
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("sweep", help="cross-product parameter sweep to CSV")
    p.add_argument("--scenes", required=True, help="comma-separated scene names")
    p.add_argument("--strategies", required=True)
    p.add_argument("--measures", default="euclidean")
    p.add_argument("--n-grid", required=True, help="comma-separated training sizes")
    p.add_argument("--param-grid", required=True,
                   help="comma-separated k or r values (ratio for topo)")
    p.add_argument("--seeds", default="0", help="comma-separated query seeds")
    p.add_argument("--queries", type=int, default=1000)
    p.add_argument("--jobs", type=int, default=1, help="parallel sweep cells")
    p.add_argument("--out", required=True)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("scene-info", help="describe a scene")
    p.add_argument("--scene", required=True)
    p.add_argument("--probe", type=int, default=0,
                   help="estimate collision fraction from this many uniform draws")
    p.set_defaults(fn=cmd_scene_info)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except SceneError as exc:
        return _fail(2, "scene", str(exc))
    except ValueError as exc:
        return _fail(2, "usage", str(exc))
    except Exception as exc:  # noqa: BLE001 - surfaced as machine-readable line
        return _fail(1, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
