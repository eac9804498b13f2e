#!/usr/bin/env python3
"""Regenerate the packaged spinal phantom scene.

Places a mock cord along the axis of the prototype-1 deployment helix at
0.7 N (gravity off) and puts the reach targets on the deployment path:
lateral mid-way around the cord, ventral near full deployment, and the
two DRG targets slightly off-path. Writes the scene JSON used by the
teleop demo. Run from the repository root:

    python tools/author_scene.py
"""

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from helirod.ftl import _point_at_fraction, ftl_reference  # noqa: E402
from helirod.geometry import preset  # noqa: E402
from helirod.statics import LoadCase, solve_statics  # noqa: E402

TAU = 0.7
PRESET = "prototype1"
OUT = Path(__file__).resolve().parents[1] / "src/helirod/teleop/scenes/spinal_phantom.json"


def fit_axis(points, axis_dir):
    """Least-squares center of the circle traced around axis_dir."""
    d = axis_dir / np.linalg.norm(axis_dir)
    e1 = np.cross(d, [1.0, 0.0, 0.0])
    if np.linalg.norm(e1) < 1e-6:
        e1 = np.cross(d, [0.0, 1.0, 0.0])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(d, e1)
    xy = np.column_stack([points @ e1, points @ e2])
    # algebraic circle fit: |q|^2 = 2 c.q + (r^2 - |c|^2)
    A = np.column_stack([2 * xy, np.ones(len(xy))])
    b = (xy**2).sum(axis=1)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    cx, cy, c0 = sol
    radius = float(np.sqrt(c0 + cx**2 + cy**2))
    center = cx * e1 + cy * e2
    return center, d, radius


def main():
    geom = preset(PRESET)
    sol = solve_statics(geom, LoadCase(tau=TAU))
    ref = ftl_reference(geom, TAU, LoadCase())
    axis_dir = sol.u[0] / np.linalg.norm(sol.u[0])  # constant-rate helix axis
    center, d, helix_radius = fit_axis(sol.p, axis_dir)

    span = sol.p @ d
    a0 = center + (span.min() - 4.0) * d
    a1 = center + (span.max() + 4.0) * d
    cord_radius = round(helix_radius - geom.r_out - 1.3, 3)

    def on_path(frac):
        return _point_at_fraction(ref, frac)

    def off_path(frac, out_mm):
        p = on_path(frac)
        radial = p - (center + ((p - center) @ d) * d)
        radial /= np.linalg.norm(radial)
        return p + out_mm * radial

    targets = [
        {"label": "lateral", "center": on_path(0.55).round(4).tolist(), "radius": 1.5},
        {"label": "ventral", "center": on_path(0.95).round(4).tolist(), "radius": 1.5},
        {"label": "drg_left", "center": off_path(0.70, 1.2).round(4).tolist(), "radius": 1.5},
        {"label": "drg_right", "center": off_path(0.85, 1.2).round(4).tolist(), "radius": 1.5},
    ]

    scene = {
        "cord_axis": [a0.round(4).tolist(), a1.round(4).tolist()],
        "cord_radius": cord_radius,
        "targets": targets,
        "entry_position": sol.p[0].round(4).tolist(),
        "entry_axis": [0.0, 0.0, 1.0],
        "meta": {
            "preset": PRESET,
            "tau": TAU,
            "gravity": "off",
            "helix_radius": round(helix_radius, 4),
            "generator": "tools/author_scene.py",
        },
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(scene, indent=1, sort_keys=True) + "\n")
    print(f"wrote {OUT}")
    print(f"helix radius {helix_radius:.3f} mm, cord radius {cord_radius} mm")


if __name__ == "__main__":
    main()
