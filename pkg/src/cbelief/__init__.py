"""Belief models of a serial arm's collision space from sampled collision checks."""

from .arm import ArmSpec, default_arm, forward_kinematics, planar_2r_arm
from .dataset import TrainingSet, generate_training_set
from .estimators import BeliefModel, ModelConfig, TopoModel, build_model
from .evaluation import EvalResult, QuerySet, evaluate, generate_query_set
from .similarity import (
    Covariance,
    ImportanceWeights,
    SimilarityMeasure,
    WeightMatrix,
    importance_weights_free,
    importance_weights_obs,
    similarity,
)
from .sobol import SobolGenerator, transform_to_cspace
from .world import (
    CollisionOutcome,
    CollisionReport,
    CollisionState,
    World,
    collision_check,
    load_scene,
)

__version__ = "0.1.0"

__all__ = [
    "ArmSpec", "default_arm", "forward_kinematics", "planar_2r_arm",
    "TrainingSet", "generate_training_set",
    "BeliefModel", "ModelConfig", "TopoModel", "build_model",
    "EvalResult", "QuerySet", "evaluate", "generate_query_set",
    "Covariance", "ImportanceWeights", "SimilarityMeasure", "WeightMatrix",
    "importance_weights_free", "importance_weights_obs", "similarity",
    "SobolGenerator", "transform_to_cspace",
    "CollisionOutcome", "CollisionReport", "CollisionState", "World",
    "collision_check", "load_scene",
]
