"""Scene/arm tuning harness: collision fractions, link histogram, accuracy orderings.

Exploratory tool used while designing the shipped scenes; not part of the
test suite.
"""

import sys
from collections import Counter

import numpy as np

from cbelief.arm import ArmSpec
from cbelief.dataset import generate_training_set
from cbelief.estimators import ModelConfig, build_model
from cbelief.evaluation import evaluate, generate_query_set
from cbelief.geometry import Box, Sphere
from cbelief.world import CollisionState, World, collision_check


def make_arm():
    return ArmSpec(
        axes=np.array([[0, 0, 1], [0, 1, 0], [0, 0, 1], [0, 1, 0],
                       [0, 0, 1], [0, 1, 0], [0, 1, 0]], dtype=float),
        offsets=np.array([[0, 0, 0.22], [0, 0, 0.30], [0, 0, 0.26], [0, 0, 0.24],
                          [0, 0, 0.18], [0, 0, 0.15], [0, 0, 0.07]]),
        radii=np.array([0.070, 0.065, 0.060, 0.050, 0.035, 0.035, 0.100]),
        lower=np.array([-2.6, -2.0, -2.8, -0.9, -1.0, -0.9, -0.9]),
        upper=np.array([2.6, 2.0, 2.8, 3.1, 1.0, 0.9, 0.9]),
    )


def sph(x, y, z, r):
    c = np.array([x, y, z], float)
    assert np.linalg.norm(c) - r >= 0.87, (c, np.linalg.norm(c) - r)
    return Sphere(c, r)


def make_scenes():
    return {
        "shelf": World("shelf", (
            Box(np.array([0.9, -1.6, -1.6]), np.array([1.32, 1.6, -1.05])),
            Box(np.array([0.9, -1.6, -0.72]), np.array([1.32, 1.6, -0.35])),
            Box(np.array([0.9, -1.6, -0.02]), np.array([1.32, 1.6, 0.35])),
            Box(np.array([0.9, -1.6, 0.68]), np.array([1.32, 1.6, 1.05])),
            Box(np.array([1.26, -1.6, -1.6]), np.array([1.5, 1.6, 1.1])),
            Box(np.array([-1.7, -1.45, -1.6]), np.array([1.7, -0.95, 1.6])),
        )),
        "table": World("table", (
            Box(np.array([-1.7, -1.7, -1.35]), np.array([1.7, 1.7, -0.92])),
            Box(np.array([-1.7, 0.95, -1.7]), np.array([1.7, 1.4, 1.7])),
            sph(1.0, -0.65, -0.55, 0.25),
            sph(-1.05, -0.5, -0.55, 0.25),
            sph(0.3, -1.15, 0.45, 0.25),
        )),
        "clutter": World("clutter", (
            sph(1.02, 0.6, 0.7, 0.30), sph(-0.85, 0.97, 0.22, 0.28),
            sph(0.55, -1.12, 0.45, 0.28), sph(-0.6, -0.77, 1.02, 0.28),
            sph(0.22, 1.02, 1.18, 0.28), sph(-1.18, -0.13, -0.6, 0.28),
            sph(1.12, -0.45, -0.55, 0.28), sph(0.0, -1.28, -0.45, 0.28),
            sph(-0.22, 0.13, 1.42, 0.30), sph(1.32, 0.5, 0.0, 0.30),
            sph(-0.33, 1.32, -0.38, 0.30), sph(-0.97, 0.38, 0.92, 0.28),
        )),
    }


MODELS = (
    ("nn/eu", ModelConfig("nn", "euclidean", k=10)),
    ("nn/we", ModelConfig("nn", "weighted-euclidean", k=10)),
    ("topo", ModelConfig("topo", "euclidean")),
    ("epan", ModelConfig("epanechnikov", "euclidean", radius=1.5)),
)


def main(n_train=2000, m_queries=1000, seeds=(3, 11, 27)):
    arm = make_arm()
    scenes = make_scenes()
    rng = np.random.default_rng(7)
    for name, world in scenes.items():
        counts = {s: 0 for s in CollisionState}
        links = Counter()
        for _ in range(1500):
            q = rng.uniform(arm.lower, arm.upper)
            out = collision_check(world, arm, q)
            counts[out.state] += 1
            if out.report:
                links[out.report.first_link_index] += 1
        print(name, {s.value: round(c / 1500, 3) for s, c in counts.items()},
              dict(sorted(links.items())), flush=True)

    results = {}
    for name, world in scenes.items():
        ts = generate_training_set(world, arm, n_train)
        built = {key: build_model(ts, arm, cfg)[0] for key, cfg in MODELS}
        accs = {key: [] for key, _ in MODELS}
        for seed in seeds:
            qs = generate_query_set(world, arm, m_queries, seed=seed)
            for key, _ in MODELS:
                accs[key].append(round(evaluate(built[key], qs).accuracy, 4))
        results[name] = {k: float(np.median(v)) for k, v in accs.items()}
        print(name, {k: accs[k] for k in accs}, "->", results[name], flush=True)

    med = {k: float(np.median([results[s][k] for s in results]))
           for k, _ in MODELS}
    print("medians over scenes:", med)
    print("criterion7 topo >= nn-0.02:", med["topo"] >= med["nn/eu"] - 0.02)
    print("criterion8 weighted >= euclid:", med["nn/we"] >= med["nn/eu"])


if __name__ == "__main__":
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    main(n_train=n)
