#!/usr/bin/env python3
"""
Tests for Poisson point sets: sampling, thinning, superposition, the planar
symmetries and CSV persistence.
"""

import shutil
import tempfile
import unittest
from pathlib import Path

import numpy as np

from src.analysis.stat_tests import chi2_uniform, dispersion_test
from src.core.errors import InvalidInputError, InvalidParameterError
from src.core.point_process import (
    Interval,
    Points1D,
    Points2D,
    Rect,
    UnitStream,
    read_points1d_csv,
    read_points2d_csv,
    reflect_1d,
    rotate180,
    sample_poisson_1d,
    sample_poisson_2d,
    superpose,
    thin,
    transpose_points,
    write_points_csv,
)


class TestUnitStream(unittest.TestCase):
    """Test reproducible random streams"""

    def test_same_stream_same_numbers(self):
        a = UnitStream(7, 3).generator().random(5)
        b = UnitStream(7, 3).generator().random(5)
        np.testing.assert_array_equal(a, b)

    def test_streams_and_children_differ(self):
        base = UnitStream(7, 3).generator().random(5)
        other = UnitStream(7, 4).generator().random(5)
        child = UnitStream(7, 3).child(0).generator().random(5)
        self.assertFalse(np.array_equal(base, other))
        self.assertFalse(np.array_equal(base, child))

    def test_negative_stream_id_rejected(self):
        with self.assertRaises(InvalidParameterError):
            UnitStream(7, -1)


class TestPointSets(unittest.TestCase):
    """Test the validated point containers"""

    def test_interval_validation(self):
        with self.assertRaises(InvalidInputError):
            Interval(1.0, 0.0)
        with self.assertRaises(InvalidInputError):
            Interval(0.0, float("inf"))
        self.assertEqual(Interval(2.0, 5.0).length, 3.0)

    def test_points1d_must_increase_strictly(self):
        iv = Interval(0.0, 1.0)
        with self.assertRaises(InvalidInputError):
            Points1D([0.5, 0.5], iv)
        with self.assertRaises(InvalidInputError):
            Points1D([0.6, 0.2], iv)
        with self.assertRaises(InvalidInputError):
            Points1D([0.5, 1.5], iv)

    def test_count_and_gaps(self):
        p = Points1D([0.2, 0.5, 0.9], Interval(0.0, 1.0))
        self.assertEqual(p.count_in(0.2, 0.9), 2)
        self.assertEqual(p.count_in(0.0, 1.0), 3)
        np.testing.assert_allclose(p.gaps(), [0.2, 0.3, 0.4])

    def test_points2d_sorted_by_time(self):
        p = Points2D([[0.1, 0.9], [0.8, 0.2]], Rect.box(1, 1))
        np.testing.assert_array_equal(p.t, [0.2, 0.9])
        self.assertEqual(p.count_in_box(1.0, 0.5), 1)

    def test_points2d_rejects_duplicates_and_outsiders(self):
        box = Rect.box(1, 1)
        with self.assertRaises(InvalidInputError):
            Points2D([[0.3, 0.3], [0.3, 0.3]], box)
        with self.assertRaises(InvalidInputError):
            Points2D([[1.3, 0.3]], box)


class TestPoissonSampling(unittest.TestCase):
    """Test homogeneous Poisson samplers"""

    def test_zero_rate_is_empty(self):
        self.assertTrue(len(sample_poisson_1d(Interval(0, 1), 0.0, UnitStream(1))) == 0)
        self.assertTrue(len(sample_poisson_2d(Rect.box(1, 1), 0.0, UnitStream(1))) == 0)

    def test_negative_rate_rejected(self):
        with self.assertRaises(InvalidParameterError):
            sample_poisson_1d(Interval(0, 1), -1.0, UnitStream(1))
        with self.assertRaises(InvalidParameterError):
            sample_poisson_2d(Rect.box(1, 1), -0.5, UnitStream(1))

    def test_mean_count_1d(self):
        counts = [len(sample_poisson_1d(Interval(0, 100), 1.0, UnitStream(11, i))) for i in range(400)]
        # standard error of the mean is 0.5
        self.assertAlmostEqual(np.mean(counts), 100.0, delta=2.0)

    def test_mean_count_2d(self):
        counts = [len(sample_poisson_2d(Rect.box(10, 10), 1.0, UnitStream(12, i))) for i in range(400)]
        self.assertAlmostEqual(np.mean(counts), 100.0, delta=2.0)

    def test_quadrants_of_one_large_sample(self):
        box = Rect.box(100, 100)
        points = sample_poisson_2d(box, 1.0, UnitStream(16))
        self.assertTrue(chi2_uniform(points, box, (2, 2)).passed)

    def test_dispersion_of_counts(self):
        counts = [len(sample_poisson_1d(Interval(0, 50), 2.0, UnitStream(13, i))) for i in range(1000)]
        variance_to_mean = np.var(counts, ddof=1) / np.mean(counts)
        self.assertAlmostEqual(variance_to_mean, 1.0, delta=0.15)
        self.assertTrue(dispersion_test(counts, 100.0).passed)

    def test_points_inside_interval(self):
        p = sample_poisson_1d(Interval(3.0, 8.0), 4.0, UnitStream(14))
        self.assertTrue(np.all((p.pts > 3.0) & (p.pts < 8.0)))

    def test_reproducible(self):
        a = sample_poisson_2d(Rect.box(5, 5), 1.0, UnitStream(15, 2))
        b = sample_poisson_2d(Rect.box(5, 5), 1.0, UnitStream(15, 2))
        self.assertEqual(a, b)


class TestThinningAndSuperposition(unittest.TestCase):
    """Test the couplings between point sets of different intensity"""

    def setUp(self):
        self.p = sample_poisson_1d(Interval(0, 50), 2.0, UnitStream(21))

    def test_keep_all(self):
        kept, removed = thin(self.p, 1.0, UnitStream(22))
        self.assertEqual(kept, self.p)
        self.assertEqual(len(removed), 0)

    def test_keep_none(self):
        kept, removed = thin(self.p, 0.0, UnitStream(22))
        self.assertEqual(len(kept), 0)
        self.assertEqual(removed, self.p)

    def test_keep_prob_out_of_range(self):
        with self.assertRaises(InvalidParameterError):
            thin(self.p, 1.5, UnitStream(22))
        with self.assertRaises(InvalidParameterError):
            thin(self.p, -0.1, UnitStream(22))

    def test_half_thinning_gives_rate_one(self):
        kept_counts = []
        for i in range(500):
            p = sample_poisson_1d(Interval(0, 50), 2.0, UnitStream(23, i).child(0))
            kept, _ = thin(p, 0.5, UnitStream(23, i).child(1))
            kept_counts.append(len(kept))
        self.assertAlmostEqual(np.mean(kept_counts), 50.0, delta=1.5)
        self.assertTrue(dispersion_test(kept_counts, 50.0).passed)

    def test_superpose_restores_thinned_set(self):
        kept, removed = thin(self.p, 0.4, UnitStream(24))
        self.assertEqual(superpose(kept, removed), self.p)

    def test_superposition_is_poisson_of_summed_rate(self):
        # Poisson(gamma) plus independent Poisson(delta - gamma) on [0, 40], gamma = 1, delta = 1.5
        iv = Interval(0, 40)
        counts = []
        for i in range(1000):
            a = sample_poisson_1d(iv, 1.0, UnitStream(25, i).child(0))
            b = sample_poisson_1d(iv, 0.5, UnitStream(25, i).child(1))
            counts.append(len(superpose(a, b)))
        self.assertAlmostEqual(np.mean(counts), 60.0, delta=1.0)
        self.assertTrue(dispersion_test(counts, 60.0).passed)

    def test_superpose_requires_same_interval(self):
        with self.assertRaises(InvalidInputError):
            superpose(Points1D([0.5], Interval(0, 1)), Points1D([0.5], Interval(0, 2)))


class TestSymmetries(unittest.TestCase):
    """Test rotation, transposition and reflection"""

    def test_rotate180_unit_square(self):
        rotated = rotate180(Points2D([[0.3, 0.2]], Rect.box(1, 1)), Rect.box(1, 1))
        np.testing.assert_allclose(rotated.pts, [[0.7, 0.8]])

    def test_rotate180_is_an_involution(self):
        box = Rect.box(4, 3)
        p = sample_poisson_2d(box, 2.0, UnitStream(31))
        np.testing.assert_allclose(rotate180(rotate180(p, box), box).pts, p.pts, atol=box.tolerance)

    def test_rotate180_rejects_outside_point(self):
        p = Points2D([[2.0, 2.0]], Rect.box(3, 3))
        with self.assertRaises(InvalidInputError):
            rotate180(p, Rect.box(1, 1))

    def test_transpose(self):
        t = transpose_points(Points2D([[1.0, 2.0]], Rect.box(3, 4)))
        np.testing.assert_array_equal(t.pts, [[2.0, 1.0]])
        self.assertEqual(t.rect, Rect.box(4, 3))

    def test_reflect_1d(self):
        r = reflect_1d(Points1D([0.1, 0.5], Interval(0, 2)))
        np.testing.assert_allclose(r.pts, [1.5, 1.9])


class TestPointCsv(unittest.TestCase):
    """Test CSV persistence of point sets"""

    def setUp(self):
        self.test_dir = Path(tempfile.mkdtemp())

    def tearDown(self):
        shutil.rmtree(self.test_dir)

    def test_csv_keeps_every_digit(self):
        box = Rect.box(7, 9)
        p = sample_poisson_2d(box, 1.0, UnitStream(41))
        q = sample_poisson_1d(box.x, 1.0, UnitStream(42))
        self.assertEqual(read_points2d_csv(write_points_csv(p, self.test_dir / "p.csv"), box), p)
        self.assertEqual(read_points1d_csv(write_points_csv(q, self.test_dir / "q.csv"), box.x), q)

    def test_headers(self):
        path = write_points_csv(Points2D([[0.5, 0.25]], Rect.box(1, 1)), self.test_dir / "p.csv")
        self.assertEqual(path.read_text().splitlines()[0], "x,t")

    def test_wrong_columns_rejected(self):
        path = write_points_csv(Points2D([[0.5, 0.25]], Rect.box(1, 1)), self.test_dir / "p.csv")
        with self.assertRaises(InvalidInputError):
            read_points1d_csv(path, Interval(0, 1))


if __name__ == "__main__":
    unittest.main(verbosity=2)
