import math

import numpy as np
import pytest

from helirod.errors import TrajectoryError
from helirod.metrics import (
    Trajectory,
    max_euclidean_distance,
    nearest_point_distances,
    nearest_point_rmse,
    resample_by_arclength,
    rmse_paired,
    truncate_by_arclength,
)


def straight_z(length=10.0, n=11):
    z = np.linspace(0.0, length, n)
    return Trajectory(np.column_stack([np.zeros(n), np.zeros(n), z]))


def unit_circle(n=1000):
    t = np.linspace(0.0, 2.0 * math.pi, n)
    return Trajectory(np.column_stack([np.cos(t), np.sin(t), np.zeros(n)]))


def random_rigid_transform(rng):
    w = rng.normal(size=3)
    th = np.linalg.norm(w)
    k = w / th
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    R = np.eye(3) + math.sin(th) * K + (1 - math.cos(th)) * (K @ K)
    t = rng.normal(scale=5.0, size=3)
    return R, t


class TestTrajectory:
    def test_needs_two_points(self):
        with pytest.raises(TrajectoryError):
            Trajectory(np.zeros((1, 3)))

    def test_cum_arclength(self):
        tr = straight_z(10.0, 11)
        assert tr.cum_arclength[0] == 0.0
        assert tr.total_arclength == pytest.approx(10.0)
        assert np.all(np.diff(tr.cum_arclength) >= 0.0)


class TestResample:
    def test_straight_segment_midpoint(self):
        tr = Trajectory([[0, 0, 0], [0, 0, 10.0]])
        out = resample_by_arclength(tr, 3)
        assert np.allclose(out.points[1], [0, 0, 5.0])
        assert np.array_equal(out.points[0], tr.points[0])
        assert np.array_equal(out.points[-1], tr.points[-1])

    def test_idempotent_on_uniform(self):
        tr = straight_z(12.0, 25)
        again = resample_by_arclength(tr, 25)
        assert np.allclose(again.points, tr.points, atol=1e-12)

    def test_circle_chords_equal(self):
        out = resample_by_arclength(unit_circle(1000), 100)
        chords = np.linalg.norm(np.diff(out.points, axis=0), axis=1)
        assert chords.max() - chords.min() < 1e-6

    def test_degenerate_rejected(self):
        tr = Trajectory([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]])
        with pytest.raises(TrajectoryError, match="zero-length"):
            resample_by_arclength(tr, 5)
        with pytest.raises(TrajectoryError, match="n >= 2"):
            resample_by_arclength(straight_z(), 1)


class TestPairedMetrics:
    def test_identical(self):
        tr = unit_circle(50)
        assert rmse_paired(tr, tr) == 0.0
        assert max_euclidean_distance(tr, tr) == 0.0

    def test_translated_copy(self):
        a = unit_circle(64)
        b = Trajectory(a.points + np.array([1.0, 0.0, 0.0]))
        assert rmse_paired(a, b) == pytest.approx(1.0, rel=1e-12)
        assert max_euclidean_distance(a, b) == pytest.approx(1.0, rel=1e-12)

    def test_two_point_hand_case(self):
        a = Trajectory([[0, 0, 0], [0, 0, 1.0]])
        b = Trajectory([[1.0, 0, 0], [0, 0, 1.0]])
        assert rmse_paired(a, b) == pytest.approx(math.sqrt(0.5), rel=1e-12)
        assert max_euclidean_distance(a, b) == pytest.approx(1.0, rel=1e-12)

    def test_single_displaced_point(self):
        a = straight_z(10.0, 11)
        pts = a.points.copy()
        pts[5] += [0.0, 2.0, 0.0]
        b = Trajectory(pts)
        assert max_euclidean_distance(a, b) == pytest.approx(2.0, rel=1e-12)

    def test_count_mismatch(self):
        with pytest.raises(TrajectoryError, match="resample"):
            rmse_paired(straight_z(10, 5), straight_z(10, 6))

    def test_rmse_below_med(self, rng):
        for _ in range(20):
            a = Trajectory(rng.normal(size=(12, 3)))
            b = Trajectory(rng.normal(size=(12, 3)))
            assert rmse_paired(a, b) <= max_euclidean_distance(a, b) + 1e-15

    def test_rigid_invariance(self, rng):
        a = Trajectory(rng.normal(size=(30, 3)))
        b = Trajectory(rng.normal(size=(30, 3)))
        r0, m0 = rmse_paired(a, b), max_euclidean_distance(a, b)
        for _ in range(5):
            R, t = random_rigid_transform(rng)
            ta = Trajectory(a.points @ R.T + t)
            tb = Trajectory(b.points @ R.T + t)
            assert rmse_paired(ta, tb) == pytest.approx(r0, rel=1e-10)
            assert max_euclidean_distance(ta, tb) == pytest.approx(m0, rel=1e-10)


class TestNearestPoint:
    def test_point_on_polyline(self):
        tr = straight_z(10.0, 11)
        d = nearest_point_distances(np.array([[0.0, 0.0, 3.21]]), tr)
        assert d[0] == pytest.approx(0.0, abs=1e-12)

    def test_projection_beats_vertices(self):
        # query near the middle of a long segment, far from both vertices
        tr = Trajectory([[0, 0, 0], [0, 0, 10.0]])
        d = nearest_point_distances(np.array([[0.5, 0.0, 5.0]]), tr)
        assert d[0] == pytest.approx(0.5, rel=1e-12)

    def test_clamped_to_ends(self):
        tr = Trajectory([[0, 0, 0], [0, 0, 10.0]])
        d = nearest_point_distances(np.array([[0.0, 0.0, 12.0]]), tr)
        assert d[0] == pytest.approx(2.0, rel=1e-12)

    def test_nearest_below_paired(self, rng):
        a = unit_circle(80)
        pts = a.points + rng.normal(scale=0.05, size=(80, 3))
        b = Trajectory(pts)
        assert nearest_point_rmse(b.points, a) <= rmse_paired(a, b) + 1e-15

    def test_duplicate_vertices_handled(self):
        tr = Trajectory([[0, 0, 0], [0, 0, 0], [0, 0, 5.0]])
        d = nearest_point_distances(np.array([[1.0, 0.0, 2.0]]), tr)
        assert d[0] == pytest.approx(1.0, rel=1e-12)


class TestTruncate:
    def test_prefix_interpolates_cut(self):
        tr = straight_z(10.0, 11)
        cut = truncate_by_arclength(tr, 4.5)
        assert cut.total_arclength == pytest.approx(4.5, rel=1e-12)
        assert np.allclose(cut.points[-1], [0, 0, 4.5])

    def test_full_length_returns_copy(self):
        tr = straight_z(10.0, 11)
        cut = truncate_by_arclength(tr, 20.0)
        assert np.array_equal(cut.points, tr.points)

    def test_zero_rejected(self):
        with pytest.raises(TrajectoryError):
            truncate_by_arclength(straight_z(), 0.0)
