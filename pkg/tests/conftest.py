import hypothesis
import numpy as np
import pytest

from cbelief.dataset import generate_training_set
from cbelief.world import load_scene

hypothesis.settings.register_profile("ci", deadline=None)
hypothesis.settings.load_profile("ci")

SCENES = ("shelf", "table", "clutter")


@pytest.fixture(scope="session")
def scenes():
    return {name: load_scene(name) for name in SCENES}


@pytest.fixture(scope="session")
def clutter(scenes):
    return scenes["clutter"]


@pytest.fixture(scope="session")
def training_sets(scenes):
    """One N=2000 training set per scene, shared across the whole run."""
    out = {}
    for name, (world, arm) in scenes.items():
        out[name] = generate_training_set(world, arm, 2000)
    return out


@pytest.fixture(scope="session")
def clutter_training(training_sets):
    return training_sets["clutter"]


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)
