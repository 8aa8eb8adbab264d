#!/usr/bin/env python3
"""
Tests for the statistical checks: calibration on true nulls, power against
clear alternatives, and input validation.
"""

import math
import unittest

import numpy as np
import pytest

from src.analysis.stat_tests import (
    SlopeEstimate,
    chi2_uniform,
    dispersion_test,
    forward_gaps,
    independence_corr,
    ks_exponential,
    mean_within_se,
    poisson_report,
    rejection_rate,
    slope_band_report,
    slope_estimate,
    summarize,
    v_measure_diagnostic,
)
from src.core.coupling import Trajectory
from src.core.errors import InvalidInputError
from src.core.models import TestReport
from src.core.point_process import Interval, Points1D, Points2D, Rect, UnitStream, sample_poisson_1d, sample_poisson_2d


class TestKolmogorovSmirnov(unittest.TestCase):
    """Test the exponential gap test"""

    def setUp(self):
        self.rng = UnitStream(101).generator()

    def test_calibration(self):
        report = ks_exponential(self.rng.exponential(1.0, 10_000), 1.0)
        self.assertTrue(report.passed)
        self.assertEqual(report.n, 10_000)

    def test_power(self):
        self.assertFalse(ks_exponential(self.rng.exponential(0.5, 10_000), 1.0).passed)

    def test_single_median_gap(self):
        report = ks_exponential([math.log(2.0) / 3.0], 3.0)
        self.assertGreater(report.p_value, 0.5)

    def test_invalid_input(self):
        with self.assertRaises(InvalidInputError):
            ks_exponential([1.0, 0.0], 1.0)
        with self.assertRaises(InvalidInputError):
            ks_exponential([1.0], 0.0)


class TestDispersion(unittest.TestCase):
    """Test the index of dispersion"""

    def setUp(self):
        self.rng = UnitStream(102).generator()

    def test_poisson_counts_pass(self):
        self.assertTrue(dispersion_test(self.rng.poisson(5.0, 1000), 5.0).passed)

    def test_constant_counts_fail(self):
        self.assertFalse(dispersion_test([5] * 1000, 5.0).passed)

    def test_geometric_counts_fail(self):
        self.assertFalse(dispersion_test(self.rng.geometric(0.2, 1000), 5.0).passed)

    def test_mean_must_be_positive(self):
        with self.assertRaises(InvalidInputError):
            dispersion_test([1, 2], 0.0)


class TestUniformity(unittest.TestCase):
    """Test the chi-square uniformity check"""

    def setUp(self):
        self.box = Rect.box(1, 1)
        self.rng = UnitStream(103).generator()

    def test_uniform_sample_passes(self):
        points = Points2D(self.rng.random((10_000, 2)), self.box)
        self.assertTrue(chi2_uniform(points, self.box, (5, 5)).passed)

    def test_single_bin_fails(self):
        points = Points2D(self.rng.random((500, 2)) * 0.1, self.box)
        self.assertFalse(chi2_uniform(points, self.box, (5, 5)).passed)

    def test_gradient_fails(self):
        x = np.sqrt(self.rng.random(10_000))
        points = Points2D(np.column_stack((x, self.rng.random(10_000))), self.box)
        self.assertFalse(chi2_uniform(points, self.box, (5, 5)).passed)

    def test_sparse_bins_rejected(self):
        with self.assertRaises(InvalidInputError):
            chi2_uniform(Points2D(self.rng.random((10, 2)), self.box), self.box, (5, 5))


class TestPoissonReport(unittest.TestCase):
    """Test the composite Poisson check on simulated samples"""

    def test_1d_samples(self):
        iv = Interval(0, 50)
        samples = [sample_poisson_1d(iv, 2.0, UnitStream(104, i)) for i in range(200)]
        reports = poisson_report(samples, iv, 2.0, label="sample")
        self.assertEqual([r.name for r in reports],
                         ["sample: count dispersion", "sample: uniformity chi2", "sample: gap K-S"])
        self.assertTrue(all(r.passed for r in reports))

    def test_wrong_intensity_fails(self):
        iv = Interval(0, 50)
        samples = [sample_poisson_1d(iv, 2.0, UnitStream(105, i)) for i in range(200)]
        self.assertFalse(all(r.passed for r in poisson_report(samples, iv, 1.0)))

    def test_2d_samples(self):
        box = Rect.box(10, 10)
        samples = [sample_poisson_2d(box, 1.0, UnitStream(106, i)) for i in range(100)]
        reports = poisson_report(samples, box, 1.0)
        self.assertEqual(len(reports), 2)
        self.assertTrue(all(r.passed for r in reports))

    def test_forward_gaps_stop_at_midpoint(self):
        gaps = forward_gaps(Points1D([1.0, 3.0, 6.0, 9.0], Interval(0, 10)))
        np.testing.assert_allclose(gaps, [1.0, 2.0, 3.0])


class TestIndependence(unittest.TestCase):
    """Test the correlation check"""

    def setUp(self):
        self.rng = UnitStream(107).generator()

    def test_independent_pairs_pass(self):
        self.assertTrue(independence_corr(self.rng.poisson(10, 500), self.rng.poisson(10, 500)).passed)

    def test_identical_sequences_fail(self):
        a = self.rng.poisson(10, 500)
        self.assertFalse(independence_corr(a, a).passed)

    def test_length_mismatch(self):
        with self.assertRaises(InvalidInputError):
            independence_corr([1, 2, 3], [1, 2])
        with self.assertRaises(InvalidInputError):
            independence_corr(list(range(10)), list(range(10)))


class TestSlopes(unittest.TestCase):
    """Test slope estimates from trajectories"""

    def test_constant_zero(self):
        est = slope_estimate(Trajectory([], []), 100.0)
        self.assertEqual(est.slope, 0.0)
        self.assertEqual(est.n, 1)

    def test_staircase(self):
        steps = np.arange(1.0, 1001.0)
        est = slope_estimate(Trajectory(steps, steps), 1000.0)
        self.assertAlmostEqual(est.slope, 0.999, delta=0.002)

    def test_censored_trajectories_dropped(self):
        trajs = [Trajectory([1.0], [2.0]), Trajectory([1.0], [4.0]), Trajectory([1.0], [math.inf])]
        est = slope_estimate(trajs, 2.0)
        self.assertEqual((est.n, est.censored), (2, 1))
        self.assertAlmostEqual(est.slope, 1.5)

    def test_band_report_records_censoring(self):
        report = slope_band_report("speed", SlopeEstimate(1.0, 0.01, 98, 2), 0.9, 1.1, 1.0)
        self.assertTrue(report.passed)
        self.assertIn("censored 2 of 100", report.notes)

    def test_band_report_fails_when_many_censored(self):
        report = slope_band_report("speed", SlopeEstimate(1.0, 0.01, 90, 10), 0.9, 1.1, 1.0)
        self.assertFalse(report.passed)
        self.assertEqual(report.statistic, 1.0)
        self.assertIn("censored share", report.notes)
        self.assertTrue(slope_band_report("speed", SlopeEstimate(1.0, 0.01, 90, 10), 0.9, 1.1, 1.0,
                                          max_censored_share=0.2).passed)

    def test_mean_within_se(self):
        values = UnitStream(108).generator().normal(3.0, 1.0, 400)
        self.assertTrue(mean_within_se(values, 3.0, name="mean").passed)
        self.assertFalse(mean_within_se(values, 4.0, name="mean").passed)
        with self.assertRaises(InvalidInputError):
            mean_within_se([1.0], 1.0, name="mean")


class TestDiagnostics(unittest.TestCase):
    """Test the V_t table and report helpers"""

    def test_v_measure_empty(self):
        box = Rect.box(10, 10)
        table = v_measure_diagnostic(Points2D.empty(box), Points2D.empty(box), 5.0, [(1.0, 1.0), (2.0, 0.5)])
        self.assertEqual(table["value"].tolist(), [0.0, 0.0])
        self.assertEqual(table["reference"].tolist(), [2.0, 2.0])

    def test_v_measure_swaps_sign(self):
        box = Rect.box(20, 20)
        grid = [(0.5, 0.5), (1.0, 1.0), (2.0, 0.5), (0.25, 3.0)]
        for seed in range(20):
            alphas = sample_poisson_2d(box, 1.0, UnitStream(109, seed))
            betas = sample_poisson_2d(box, 0.8, UnitStream(110, seed))
            forward = v_measure_diagnostic(alphas, betas, 5.0, grid)
            backward = v_measure_diagnostic(betas, alphas, 5.0, grid)
            np.testing.assert_array_equal(forward["value"].to_numpy(), -backward["value"].to_numpy())
            np.testing.assert_array_equal(forward["reference"].to_numpy(), backward["reference"].to_numpy())

    def test_rejection_rate_and_summary(self):
        reports = [TestReport.pathwise("a", 0, 10), TestReport.pathwise("b", 2, 10)]
        self.assertEqual(rejection_rate(reports), 0.5)
        frame = summarize(reports)
        self.assertEqual(frame["pass"].tolist(), [True, False])


@pytest.mark.slow
class TestNullCalibration(unittest.TestCase):
    """Rejection rates at alpha = 0.01 over 1000 independent true-null seeds"""

    seeds = 1000
    lo, hi = 0.002, 0.03

    def assertCalibrated(self, reports):
        rate = rejection_rate(reports)
        self.assertGreaterEqual(rate, self.lo)
        self.assertLessEqual(rate, self.hi)

    def test_ks_exponential(self):
        self.assertCalibrated([
            ks_exponential(UnitStream(120, i).generator().exponential(0.5, 200), 2.0)
            for i in range(self.seeds)
        ])

    def test_dispersion(self):
        self.assertCalibrated([
            dispersion_test(UnitStream(121, i).generator().poisson(20.0, 100), 20.0)
            for i in range(self.seeds)
        ])

    def test_chi2_uniform(self):
        box = Rect.box(1, 1)
        self.assertCalibrated([
            chi2_uniform(Points2D(UnitStream(122, i).generator().random((500, 2)), box), box, (5, 5))
            for i in range(self.seeds)
        ])

    def test_independence(self):
        def pair(i):
            rng = UnitStream(123, i).generator()
            return rng.poisson(10.0, 100), rng.poisson(10.0, 100)

        self.assertCalibrated([independence_corr(*pair(i)) for i in range(self.seeds)])


if __name__ == "__main__":
    unittest.main(verbosity=2)
