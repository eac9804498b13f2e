"""Phantom scene for the interactive navigation demo.

The scene holds a mock spinal cord (a capsule around an axis segment),
named reach targets around it, and the dorsal entry pose of the robot in
the robot's base frame (mm). A scene ships with the package as JSON;
values are demo data chosen so that the follow-the-leader deployment of
the named preset wraps the cord and passes through the targets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from ..errors import SceneError
from ..metrics import Trajectory, nearest_point_distances

__all__ = ["Target", "PhantomScene", "load_scene", "default_scene_path"]

KNOWN_TARGETS = ("lateral", "ventral", "drg_left", "drg_right")


@dataclass
class Target:
    label: str
    center: np.ndarray
    radius: float

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float).reshape(3)
        if self.radius <= 0.0:
            raise SceneError(f"target {self.label!r}: reach radius must be > 0")


@dataclass
class PhantomScene:
    cord_axis: np.ndarray  # (2, 3) segment end points
    cord_radius: float
    targets: list[Target]
    entry_position: np.ndarray
    entry_axis: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.cord_axis = np.asarray(self.cord_axis, dtype=float).reshape(2, 3)
        self.entry_position = np.asarray(self.entry_position, dtype=float).reshape(3)
        self.entry_axis = np.asarray(self.entry_axis, dtype=float).reshape(3)
        if self.cord_radius <= 0.0:
            raise SceneError("cord radius must be > 0")
        for t in self.targets:
            if self.distance_to_cord_axis(t.center) <= self.cord_radius:
                raise SceneError(f"target {t.label!r} lies inside the cord volume")

    def distance_to_cord_axis(self, point) -> float:
        axis = Trajectory(self.cord_axis)
        return float(nearest_point_distances(np.asarray(point, dtype=float), axis)[0])

    def target(self, label: str) -> Target:
        for t in self.targets:
            if t.label == label:
                return t
        raise SceneError(f"no target labeled {label!r}")

    def to_dict(self) -> dict:
        return {
            "cord_axis": self.cord_axis.tolist(),
            "cord_radius": self.cord_radius,
            "targets": [
                {"label": t.label, "center": t.center.tolist(), "radius": t.radius}
                for t in self.targets
            ],
            "entry_position": self.entry_position.tolist(),
            "entry_axis": self.entry_axis.tolist(),
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "PhantomScene":
        try:
            targets = [
                Target(label=t["label"], center=t["center"], radius=float(t["radius"]))
                for t in doc["targets"]
            ]
            return cls(
                cord_axis=doc["cord_axis"],
                cord_radius=float(doc["cord_radius"]),
                targets=targets,
                entry_position=doc.get("entry_position", [0.0, 0.0, 0.0]),
                entry_axis=doc.get("entry_axis", [0.0, 0.0, 1.0]),
                meta=doc.get("meta", {}),
            )
        except KeyError as exc:
            raise SceneError(f"scene document missing field {exc}") from None


def default_scene_path() -> str:
    return str(resources.files("helirod.teleop") / "scenes" / "spinal_phantom.json")


def load_scene(path: str | None = None) -> PhantomScene:
    """Load a scene JSON file; None loads the packaged spinal phantom."""
    if path is None:
        path = default_scene_path()
    with open(path, encoding="utf-8") as fh:
        return PhantomScene.from_dict(json.load(fh))
