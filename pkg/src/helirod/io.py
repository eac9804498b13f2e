"""File formats for solutions, trajectories, and plans.

All data payloads are deterministic: floats are written with repr-exact
precision ("%.17g"), JSON keys are sorted, and no timestamps or host
information go into payload files. Formats are versioned; the current
schemas are:

solution CSV (v1)
    header ``s,px,py,pz,r11,...,r33,vx,vy,vz,ux,uy,uz`` (R row-major),
    one row per arc-length sample.
trajectory CSV (v1)
    header ``s,px,py,pz`` with s the cumulative arc length.
solution JSON (v1)
    ``{"format": "helirod.solution", "version": 1, ...}`` carrying the
    samples plus solver diagnostics.
plan JSON (v1)
    ``{"format": "helirod.ftl_plan", "version": 1, ...}`` with the eta
    grid, optimized tensions, deviations, fit, and search history.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .errors import TrajectoryError
from .ftl import FtlPlan
from .metrics import Trajectory
from .statics import Solution

__all__ = [
    "write_solution_csv",
    "write_solution_json",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "write_plan_json",
    "write_plan_csv",
    "dump_json",
]

SOLUTION_CSV_HEADER = (
    "s,px,py,pz,r11,r12,r13,r21,r22,r23,r31,r32,r33,vx,vy,vz,ux,uy,uz"
)
TRAJECTORY_CSV_HEADER = "s,px,py,pz"


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def _atomic_write(path: str, text: str):
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def dump_json(doc, path: str):
    """Write a JSON document deterministically (sorted keys, repr floats)."""
    _atomic_write(path, json.dumps(_plainify(doc), sort_keys=True, indent=1) + "\n")


def _plainify(obj):
    if isinstance(obj, np.ndarray):
        return [_plainify(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _plainify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plainify(v) for v in obj]
    return obj


def write_solution_csv(sol: Solution, path: str):
    lines = [SOLUTION_CSV_HEADER]
    for i in range(len(sol.s)):
        row = [sol.s[i], *sol.p[i], *sol.R[i].reshape(9), *sol.v[i], *sol.u[i]]
        lines.append(",".join(_fmt(x) for x in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_solution_json(sol: Solution, path: str):
    doc = {
        "format": "helirod.solution",
        "version": 1,
        "tau": sol.tau,
        "eta": sol.eta,
        "converged": sol.converged,
        "residual_norm": sol.residual_norm,
        "iterations": sol.iterations,
        "diagnostics": sol.diagnostics,
        "s": sol.s,
        "p": sol.p,
        "R": sol.R.reshape(len(sol.s), 9),
        "v": sol.v,
        "u": sol.u,
    }
    dump_json(doc, path)


def write_trajectory_csv(traj: Trajectory, path: str):
    lines = [TRAJECTORY_CSV_HEADER]
    for i in range(len(traj)):
        row = [traj.cum_arclength[i], *traj.points[i]]
        lines.append(",".join(_fmt(x) for x in row))
    _atomic_write(path, "\n".join(lines) + "\n")


def read_trajectory_csv(path: str) -> Trajectory:
    """Read a trajectory from either the trajectory or the solution CSV schema."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise TrajectoryError(f"{path}: empty file")
    header = lines[0].split(",")
    try:
        ix = header.index("px")
    except ValueError:
        raise TrajectoryError(
            f"{path}: line 1: no 'px' column in header {lines[0]!r}"
        ) from None
    pts = []
    for n, ln in enumerate(lines[1:], start=2):
        cells = ln.split(",")
        if len(cells) != len(header):
            raise TrajectoryError(
                f"{path}: line {n}: expected {len(header)} columns, got {len(cells)}"
            )
        try:
            pts.append([float(cells[ix]), float(cells[ix + 1]), float(cells[ix + 2])])
        except ValueError as exc:
            raise TrajectoryError(f"{path}: line {n}: {exc}") from None
    if len(pts) < 2:
        raise TrajectoryError(f"{path}: needs at least 2 points")
    return Trajectory(np.asarray(pts))


def write_plan_json(plan: FtlPlan, path: str):
    cfg = plan.config
    doc = {
        "format": "helirod.ftl_plan",
        "version": 1,
        "config": {
            "tau_des": cfg.tau_des,
            "delta_eta": cfg.delta_eta,
            "tau_max": cfg.tau_max,
            "deviation_tolerance": cfg.deviation_tolerance,
            "gravity_enabled": cfg.gravity_enabled,
            "grid_points": cfg.grid_points,
            "tau_tol": cfg.tau_tol,
        },
        "eta": plan.eta_grid,
        "tau_opt": plan.tau_opt,
        "deviation": plan.deviation,
        "tip_error": plan.tip_error,
        "tip_positions": plan.tip_positions,
        "poly_coeffs": list(plan.poly_coeffs) if plan.poly_coeffs else None,
        "fit_residual": plan.fit_residual,
        "search_history": plan.search_history,
        "failures": plan.failures,
    }
    dump_json(doc, path)


def write_plan_csv(plan: FtlPlan, path: str):
    lines = ["eta,tau_opt,deviation,tip_error,tip_x,tip_y,tip_z"]
    for i in range(len(plan.eta_grid)):
        row = [
            plan.eta_grid[i],
            plan.tau_opt[i],
            plan.deviation[i],
            plan.tip_error[i],
            *plan.tip_positions[i],
        ]
        lines.append(",".join(_fmt(x) for x in row))
    _atomic_write(path, "\n".join(lines) + "\n")
