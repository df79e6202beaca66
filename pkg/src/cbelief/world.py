"""Worlds of primitive obstacles and the collision oracle for arm configurations.

A configuration is classified as self-colliding, in collision with the world,
or free.  Self-collision wins when both occur.  For world collisions the
outcome carries a report with the first (shoulder-most) colliding link and a
collision centroid: the midpoint of the capsule-axis sub-segment lying inside
the deepest-penetrated primitive's inflated surface.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path

import numpy as np

from .arm import ArmSpec, forward_kinematics
from .geometry import (
    Box,
    Primitive,
    Sphere,
    capsule_primitive_clearance,
    capsule_primitive_overlap_interval,
    capsules_overlap,
)

SHIPPED_SCENES = ("shelf", "table", "clutter")


class CollisionState(Enum):
    FREE = "free"
    OBS = "obs"
    SELF_COLLISION = "self"


@dataclass(frozen=True)
class CollisionReport:
    """First in-collision link (1-based, shoulder-most) and collision centroid."""

    first_link_index: int
    centroid: np.ndarray


@dataclass(frozen=True)
class CollisionOutcome:
    state: CollisionState
    report: CollisionReport | None = None


@dataclass(frozen=True)
class World:
    name: str
    obstacles: tuple[Primitive, ...]

    def __post_init__(self):
        for obs in self.obstacles:
            if isinstance(obs, Sphere):
                if obs.radius <= 0.0:
                    raise ValueError("sphere radius must be positive")
            elif isinstance(obs, Box):
                if not np.all(np.asarray(obs.lo) < np.asarray(obs.hi)):
                    raise ValueError("box min must be componentwise below max")
            else:
                raise ValueError(f"unknown obstacle type {type(obs)!r}")


def collision_check(world: World, arm: ArmSpec, q: np.ndarray) -> CollisionOutcome:
    """Classify configuration ``q``; deterministic for identical inputs."""
    capsules, _ = forward_kinematics(arm, q)
    n = len(capsules)

    # Links sharing a joint always touch there, so only pairs two or more
    # apart count as self-collision.
    for i in range(n):
        for j in range(i + 2, n):
            if capsules_overlap(capsules[i], capsules[j]):
                return CollisionOutcome(CollisionState.SELF_COLLISION)

    for link_idx, cap in enumerate(capsules, start=1):
        deepest = None
        deepest_clearance = 0.0
        for prim in world.obstacles:
            clearance = capsule_primitive_clearance(cap, prim)
            if clearance < 0.0 and (deepest is None or clearance < deepest_clearance):
                deepest = prim
                deepest_clearance = clearance
        if deepest is not None:
            interval = capsule_primitive_overlap_interval(cap, deepest)
            if interval is None:  # grazing contact at float precision
                tm = 0.5
            else:
                tm = 0.5 * (interval[0] + interval[1])
            centroid = cap.a + tm * (cap.b - cap.a)
            return CollisionOutcome(
                CollisionState.OBS, CollisionReport(link_idx, centroid)
            )

    return CollisionOutcome(CollisionState.FREE)


# ---------------------------------------------------------------------------
# Scene files: JSON documents bundling a world and the arm it was tuned for.
#
#   {
#     "name": str,
#     "obstacles": [{"type": "sphere", "center": [x,y,z], "radius": r},
#                   {"type": "box", "min": [x,y,z], "max": [x,y,z]}],
#     "arm": {"axes": [[...]x n], "offsets": [[...]x n], "radii": [...],
#             "limits": {"lower": [...], "upper": [...]}}
#   }
#
# Unknown fields anywhere in the document are rejected.
# ---------------------------------------------------------------------------


class SceneError(ValueError):
    pass


def _require_fields(obj: dict, allowed: set[str], context: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise SceneError(f"unknown field(s) {sorted(unknown)} in {context}")
    missing = allowed - set(obj)
    if missing:
        raise SceneError(f"missing field(s) {sorted(missing)} in {context}")


def parse_scene(text: str) -> tuple[World, ArmSpec]:
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise SceneError("scene document must be a JSON object")
    _require_fields(doc, {"name", "obstacles", "arm"}, "scene")

    obstacles = []
    for i, entry in enumerate(doc["obstacles"]):
        kind = entry.get("type")
        if kind == "sphere":
            _require_fields(entry, {"type", "center", "radius"}, f"obstacle {i}")
            obstacles.append(
                Sphere(np.asarray(entry["center"], dtype=float), float(entry["radius"]))
            )
        elif kind == "box":
            _require_fields(entry, {"type", "min", "max"}, f"obstacle {i}")
            obstacles.append(
                Box(
                    np.asarray(entry["min"], dtype=float),
                    np.asarray(entry["max"], dtype=float),
                )
            )
        else:
            raise SceneError(f"obstacle {i} has unknown type {kind!r}")

    arm_doc = doc["arm"]
    _require_fields(arm_doc, {"axes", "offsets", "radii", "limits"}, "arm")
    _require_fields(arm_doc["limits"], {"lower", "upper"}, "arm.limits")
    arm = ArmSpec(
        axes=np.asarray(arm_doc["axes"], dtype=float),
        offsets=np.asarray(arm_doc["offsets"], dtype=float),
        radii=np.asarray(arm_doc["radii"], dtype=float),
        lower=np.asarray(arm_doc["limits"]["lower"], dtype=float),
        upper=np.asarray(arm_doc["limits"]["upper"], dtype=float),
    )
    world = World(str(doc["name"]), tuple(obstacles))
    return world, arm


def scene_to_json(world: World, arm: ArmSpec) -> str:
    obstacles = []
    for prim in world.obstacles:
        if isinstance(prim, Sphere):
            obstacles.append(
                {
                    "type": "sphere",
                    "center": [float(x) for x in prim.center],
                    "radius": float(prim.radius),
                }
            )
        else:
            obstacles.append(
                {
                    "type": "box",
                    "min": [float(x) for x in prim.lo],
                    "max": [float(x) for x in prim.hi],
                }
            )
    doc = {
        "name": world.name,
        "obstacles": obstacles,
        "arm": {
            "axes": arm.axes.tolist(),
            "offsets": arm.offsets.tolist(),
            "radii": arm.radii.tolist(),
            "limits": {"lower": arm.lower.tolist(), "upper": arm.upper.tolist()},
        },
    }
    return json.dumps(doc, indent=2)


def load_scene(name_or_path: str | Path) -> tuple[World, ArmSpec]:
    """Load a scene by shipped name (shelf/table/clutter) or file path."""
    name = str(name_or_path)
    if name in SHIPPED_SCENES:
        text = (
            resources.files("cbelief").joinpath(f"scenes/{name}.json").read_text("utf-8")
        )
        return parse_scene(text)
    path = Path(name_or_path)
    if not path.exists():
        raise SceneError(
            f"scene {name!r} is neither a shipped scene {SHIPPED_SCENES} nor a file"
        )
    return parse_scene(path.read_text("utf-8"))
