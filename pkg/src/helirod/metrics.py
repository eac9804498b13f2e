"""Trajectory resampling and error metrics.

A trajectory is an ordered polyline of 3-D points (mm). Paired metrics
(RMSE, maximum Euclidean distance) assume sample correspondence; curves of
different sampling should be resampled by normalized arc length first.
Nearest-point distances measure proximity of points to a polyline without
assuming correspondence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import TrajectoryError

__all__ = [
    "Trajectory",
    "resample_by_arclength",
    "rmse_paired",
    "max_euclidean_distance",
    "nearest_point_distances",
    "nearest_point_rmse",
    "truncate_by_arclength",
]


@dataclass
class Trajectory:
    """Ordered 3-D polyline with cumulative arc length."""

    points: np.ndarray
    cum_arclength: np.ndarray = field(init=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise TrajectoryError(f"trajectory points must be (N, 3), got {pts.shape}")
        if len(pts) < 2:
            raise TrajectoryError("a trajectory needs at least 2 points")
        self.points = pts
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        self.cum_arclength = np.concatenate([[0.0], np.cumsum(seg)])

    def __len__(self) -> int:
        return len(self.points)

    @property
    def total_arclength(self) -> float:
        return float(self.cum_arclength[-1])


def resample_by_arclength(traj: Trajectory, n: int) -> Trajectory:
    """n points at equal cumulative-arc-length spacing (linear interpolation)."""
    if n < 2:
        raise TrajectoryError("resampling needs n >= 2")
    total = traj.total_arclength
    if total <= 0.0:
        raise TrajectoryError("cannot resample a zero-length trajectory")
    targets = np.linspace(0.0, total, n)
    out = np.column_stack(
        [np.interp(targets, traj.cum_arclength, traj.points[:, k]) for k in range(3)]
    )
    out[0] = traj.points[0]
    out[-1] = traj.points[-1]
    return Trajectory(out)


def _paired_distances(a: Trajectory, b: Trajectory) -> np.ndarray:
    if len(a) != len(b):
        raise TrajectoryError(
            f"paired metrics need equal point counts, got {len(a)} vs {len(b)}; resample first"
        )
    return np.linalg.norm(a.points - b.points, axis=1)


def rmse_paired(a: Trajectory, b: Trajectory) -> float:
    """Root mean square of pointwise Euclidean distances."""
    d = _paired_distances(a, b)
    return float(np.sqrt(np.mean(d**2)))


def max_euclidean_distance(a: Trajectory, b: Trajectory) -> float:
    """Maximum pointwise Euclidean distance."""
    return float(np.max(_paired_distances(a, b)))


def nearest_point_distances(points: np.ndarray, polyline: Trajectory) -> np.ndarray:
    """Distance from each query point to the nearest point of a polyline.

    Projects onto every segment (clamped to the segment ends), so the
    result is exact for the polyline, not just its vertices.
    """
    q = np.asarray(points, dtype=float)
    if q.ndim == 1:
        q = q[None, :]
    if q.size == 0:
        raise TrajectoryError("no query points given")
    a = polyline.points[:-1]
    d = polyline.points[1:] - a
    seg_len2 = np.einsum("ij,ij->i", d, d)
    seg_len2 = np.where(seg_len2 == 0.0, 1.0, seg_len2)
    # (Q, M) projection parameters, clamped to the segments
    t = np.einsum("qmj,mj->qm", q[:, None, :] - a[None, :, :], d) / seg_len2
    t = np.clip(t, 0.0, 1.0)
    closest = a[None, :, :] + t[:, :, None] * d[None, :, :]
    dist = np.linalg.norm(q[:, None, :] - closest, axis=2)
    return dist.min(axis=1)


def nearest_point_rmse(points: np.ndarray, polyline: Trajectory) -> float:
    """RMS of nearest-point distances of a point set to a polyline."""
    d = nearest_point_distances(points, polyline)
    return float(np.sqrt(np.mean(d**2)))


def truncate_by_arclength(traj: Trajectory, length: float) -> Trajectory:
    """Prefix of a trajectory up to a cumulative arc length.

    The cut point is interpolated on the containing segment; a length at or
    beyond the end returns the full trajectory.
    """
    if length <= 0.0:
        raise TrajectoryError("truncation length must be > 0")
    cum = traj.cum_arclength
    if length >= cum[-1]:
        return Trajectory(traj.points.copy())
    idx = int(np.searchsorted(cum, length))
    # interpolate the end point on segment idx-1 -> idx
    s0, s1 = cum[idx - 1], cum[idx]
    w = (length - s0) / (s1 - s0) if s1 > s0 else 0.0
    end = traj.points[idx - 1] + w * (traj.points[idx] - traj.points[idx - 1])
    pts = np.vstack([traj.points[:idx], end])
    if len(pts) < 2:
        pts = np.vstack([traj.points[0], end])
    return Trajectory(pts)
