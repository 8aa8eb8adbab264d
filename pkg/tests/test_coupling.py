#!/usr/bin/env python3
"""
Tests for second-class particles, coupled runs and the flux.
"""

import math
import unittest

import numpy as np

from src.analysis.stat_tests import slope_estimate
from src.core.coupling import (
    Trajectory,
    check_flux_monotone,
    check_z_below_x,
    flux,
    flux_bracket,
    flux_profile,
    isolated_second_class,
    make_coupled_pair,
    second_class_lr,
    track_z,
    track_z_prime,
    transpose_inputs,
    verify_domination,
    verify_lemma22,
    verify_ordering,
)
from src.core.engine import SimInputs, evolve, stationary_inputs
from src.core.errors import InvalidInputError, InvalidParameterError
from src.core.models import CouplingSpec
from src.core.point_process import Points1D, UnitStream

# sources {0.3}, sinks {0.4, 0.8}, one alpha-point at (0.6, 0.35)
HAND_BUILT = SimInputs.build(1, 1, sources=[0.3], sinks=[0.4, 0.8], alphas=[(0.6, 0.35)])


def stationary(seed: int, lam: float, side: float = 12.0) -> SimInputs:
    return stationary_inputs(side, side, lam, UnitStream(seed))


class TestTrajectory(unittest.TestCase):
    """Test the step-function container"""

    def setUp(self):
        self.traj = Trajectory([1.0, 2.0], [0.5, math.inf])

    def test_values(self):
        self.assertEqual(self.traj.value_at(0.5), 0.0)
        self.assertEqual(self.traj.value_at(1.0), 0.5)
        self.assertEqual(self.traj.value_before(1.0), 0.0)
        np.testing.assert_array_equal(self.traj.values_at([0.0, 1.5, 3.0]), [0.0, 0.5, math.inf])
        self.assertTrue(self.traj.escaped)

    def test_frame_starts_at_origin(self):
        frame = self.traj.to_frame()
        self.assertEqual(list(frame.columns), ["t", "x"])
        self.assertEqual(frame.iloc[0].tolist(), [0.0, 0.0])

    def test_positions_must_increase(self):
        with self.assertRaises(InvalidInputError):
            Trajectory([1.0, 2.0], [0.5, 0.4])


class TestIsolatedSecondClass(unittest.TestCase):
    """Test X and X'"""

    def test_no_sinks_stays_at_origin(self):
        traj = isolated_second_class(evolve(SimInputs.build(1, 1, sources=[0.5], alphas=[(0.2, 0.3)])))
        self.assertEqual(len(traj), 0)
        self.assertEqual(traj.value_at(1.0), 0.0)

    def test_first_sink_jump(self):
        traj = isolated_second_class(evolve(SimInputs.build(1, 1, sources=[0.5], sinks=[0.2])))
        np.testing.assert_array_equal(traj.times, [0.2])
        np.testing.assert_array_equal(traj.positions, [0.5])

    def test_void_first_sink_escapes(self):
        traj = isolated_second_class(evolve(SimInputs.build(1, 1, sinks=[0.2])))
        self.assertTrue(traj.escaped)

    def test_hand_built_x(self):
        traj = isolated_second_class(evolve(HAND_BUILT))
        np.testing.assert_array_equal(traj.times, [0.4, 0.8])
        np.testing.assert_array_equal(traj.positions, [0.3, 0.6])

    def test_lr_without_sources(self):
        traj = second_class_lr(SimInputs.build(1, 1, sinks=[0.4], alphas=[(0.2, 0.3)]))
        self.assertEqual(len(traj), 0)

    def test_hand_built_x_prime(self):
        traj = second_class_lr(HAND_BUILT)
        np.testing.assert_array_equal(traj.times, [0.3, 0.6])
        np.testing.assert_array_equal(traj.positions, [0.4, 0.8])

    def test_transpose_inputs_twice(self):
        inp = stationary(1, 2.0)
        back = transpose_inputs(transpose_inputs(inp))
        self.assertEqual(back.sources, inp.sources)
        self.assertEqual(back.sinks, inp.sinks)
        self.assertEqual(back.alphas, inp.alphas)


class TestOrdering(unittest.TestCase):
    """Test X(X'(x)) <= x"""

    def test_constant_trajectories(self):
        self.assertTrue(verify_ordering(Trajectory([], []), Trajectory([], [])))

    def test_hand_built_pair(self):
        x = isolated_second_class(evolve(HAND_BUILT))
        x_prime = second_class_lr(HAND_BUILT)
        self.assertTrue(verify_ordering(x, x_prime))
        self.assertLess(x.value_at(x_prime.value_at(0.45)), 0.45)

    def test_random_stationary_runs(self):
        for seed in range(60):
            inp = stationary(200 + seed, (0.5, 1.0, 2.0)[seed % 3])
            self.assertTrue(verify_ordering(isolated_second_class(evolve(inp)), second_class_lr(inp)), seed)


class TestAgreementRightOfX(unittest.TestCase):
    """Test that removing all sinks changes nothing right of X"""

    def test_without_sinks_trivially_true(self):
        inp = SimInputs.build(1, 1, sources=[0.5], alphas=[(0.2, 0.3)])
        log = evolve(inp)
        self.assertTrue(verify_lemma22(log, log, isolated_second_class(log)))

    def test_comparison_run_with_sinks_rejected(self):
        log = evolve(HAND_BUILT)
        with self.assertRaises(InvalidInputError):
            verify_lemma22(log, log, isolated_second_class(log))

    def test_random_stationary_runs(self):
        for seed in range(60):
            inp = stationary(300 + seed, (0.5, 1.0, 2.0)[seed % 3])
            bare = SimInputs(inp.t1, inp.t2, inp.sources, Points1D.empty(inp.box.t), inp.alphas)
            log = evolve(inp)
            self.assertTrue(verify_lemma22(log, evolve(bare), isolated_second_class(log)), seed)


class TestCoupledPair(unittest.TestCase):
    """Test thick and thin modifications and the flux"""

    def test_equal_rates_give_identical_runs(self):
        base = stationary(1, 1.0)
        pair = make_coupled_pair(base, CouplingSpec(gamma=1.0, delta=1.0), UnitStream(2))
        self.assertEqual(len(pair.added_sources), 0)
        self.assertEqual(len(pair.removed_sinks), 0)
        self.assertEqual(pair.sigma_inputs, pair.eta_inputs)

    def test_rate_mismatch_rejected(self):
        with self.assertRaises(InvalidParameterError):
            make_coupled_pair(stationary(1, 2.0), CouplingSpec(gamma=1.0, delta=1.5), UnitStream(2))

    def test_inconsistent_mode_rejected(self):
        with self.assertRaises(InvalidParameterError):
            CouplingSpec(gamma=2.0, delta=1.0, mode="thicken_sources")
        with self.assertRaises(InvalidParameterError):
            CouplingSpec(gamma=1.0, delta=2.0, mode="thin_sources")
        self.assertEqual(CouplingSpec.for_rates(2.0, 1.0).mode, "thin_sources")

    def test_flux_at_time_zero_counts_added_sources(self):
        base = stationary(3, 1.0)
        pair = make_coupled_pair(base, CouplingSpec(gamma=1.0, delta=2.0), UnitStream(4))
        logs = pair.evolve()
        for x in (0.0, 3.0, 7.5, 12.0):
            self.assertEqual(flux(logs, x, 0.0), pair.added_sources.count_in(0.0, x))

    def test_flux_profile_is_a_step_table(self):
        base = stationary(5, 1.0)
        logs = make_coupled_pair(base, CouplingSpec(gamma=1.0, delta=2.0), UnitStream(6)).evolve()
        profile = flux_profile(logs, 6.0)
        self.assertEqual(list(profile.columns), ["x", "flux"])
        for x, value in zip(profile["x"], profile["flux"]):
            self.assertEqual(flux(logs, x, 6.0), value)

    def test_z_without_removed_sinks(self):
        base = SimInputs.build(1, 1, sources=[0.5], alphas=[(0.2, 0.3)], lambda_meta=1.0)
        pair = make_coupled_pair(base, CouplingSpec(gamma=1.0, delta=2.0), UnitStream(7))
        self.assertEqual(len(track_z(pair)), 0)

    def test_z_needs_thicken_mode(self):
        pair = make_coupled_pair(stationary(8, 2.0), CouplingSpec.for_rates(2.0, 1.0), UnitStream(9))
        with self.assertRaises(InvalidParameterError):
            track_z(pair)
        with self.assertRaises(InvalidParameterError):
            track_z_prime(make_coupled_pair(stationary(8, 1.0), CouplingSpec.for_rates(1.0, 2.0), UnitStream(9)))

    def test_pathwise_statements(self):
        for seed in range(40):
            lam = (0.5, 1.0, 2.0)[seed % 3]
            base = stationary(400 + seed, lam)
            eta = evolve(base)
            x = isolated_second_class(eta)

            thick = make_coupled_pair(base, CouplingSpec.for_rates(lam, 1.5 * lam), UnitStream(400 + seed, 1))
            logs = (eta, evolve(thick.sigma_inputs))
            self.assertTrue(verify_domination(logs), seed)
            z = track_z(thick, logs)
            self.assertTrue(check_z_below_x(z, x), seed)
            z_end = z.value_at(base.t2)
            if 0.0 < z_end < math.inf:
                before, at = flux_bracket(logs, z_end, base.t2)
                self.assertLess(before, 0, seed)
                self.assertGreaterEqual(at, 0, seed)

            thin = make_coupled_pair(base, CouplingSpec.for_rates(lam, lam / 1.5), UnitStream(400 + seed, 2))
            self.assertTrue(verify_domination((evolve(thin.sigma_inputs), eta)), seed)
            z_prime = track_z_prime(thin)
            self.assertTrue(np.all(np.diff(z_prime.positions) > 0))

    def test_flux_profile_nondecreasing(self):
        for seed in range(40):
            lam = (0.5, 1.0, 2.0)[seed % 3]
            base = stationary(600 + seed, lam)
            pair = make_coupled_pair(base, CouplingSpec.for_rates(lam, 1.5 * lam), UnitStream(600 + seed, 1))
            logs = pair.evolve()
            times = [0.0, 3.0, 6.0, 9.0, 12.0]
            self.assertTrue(check_flux_monotone(logs, times), seed)
            for t in times:
                self.assertTrue(np.all(np.diff(flux_profile(logs, t)["flux"].to_numpy()) >= 0), (seed, t))

    def test_boundary_frames_follow_mode(self):
        base = stationary(12, 1.0)
        thick = make_coupled_pair(base, CouplingSpec.for_rates(1.0, 2.0), UnitStream(13))
        frames = thick.boundary_frames()
        self.assertEqual(set(frames), {"added_sources", "removed_sinks"})
        self.assertEqual(frames["added_sources"]["x"].tolist(), thick.added_sources.pts.tolist())
        self.assertEqual(len(frames["removed_sinks"]), len(thick.removed_sinks))

        thin = make_coupled_pair(base, CouplingSpec.for_rates(1.0, 0.5), UnitStream(14))
        frames = thin.boundary_frames()
        self.assertEqual(set(frames), {"removed_sources", "added_sinks"})
        self.assertEqual(len(frames["removed_sources"]) + len(thin.sigma_inputs.sources), len(base.sources))
        self.assertEqual(frames["added_sinks"]["x"].tolist(), thin.added_sinks.pts.tolist())

    def test_mismatched_logs_rejected(self):
        a = evolve(stationary(10, 1.0))
        b = evolve(stationary(11, 1.0))
        with self.assertRaises(InvalidInputError):
            flux((a, b), 1.0, 1.0)


class TestCouplingSpeeds(unittest.TestCase):
    """Test the speeds of Z and Z' on moderate boxes"""

    horizon = 100.0
    replications = 60
    # the boxes are twice as long as the expected travel, 0.5 * horizon
    margin = 2.0

    def test_z_speed(self):
        # gamma = 1, delta = 2: Z_t / t -> 1 / (gamma delta)
        trajs = []
        for i in range(self.replications):
            base = stationary_inputs(self.margin * self.horizon * 0.5, self.horizon, 1.0, UnitStream(700, i))
            pair = make_coupled_pair(base, CouplingSpec.for_rates(1.0, 2.0), UnitStream(700, i).child(1))
            trajs.append(track_z(pair))
        est = slope_estimate(trajs, self.horizon)
        self.assertLessEqual(est.censored, 3)
        self.assertAlmostEqual(est.slope, 0.5, delta=0.125)

    def test_z_prime_speed(self):
        # gamma = 1, delta = 1/2: Z'_x / x -> gamma delta
        trajs = []
        for i in range(self.replications):
            base = stationary_inputs(self.horizon, self.margin * self.horizon * 0.5, 1.0, UnitStream(710, i))
            pair = make_coupled_pair(base, CouplingSpec.for_rates(1.0, 0.5), UnitStream(710, i).child(1))
            trajs.append(track_z_prime(pair))
        est = slope_estimate(trajs, self.horizon)
        self.assertLessEqual(est.censored, 3)
        self.assertAlmostEqual(est.slope, 0.5, delta=0.125)


if __name__ == "__main__":
    unittest.main(verbosity=2)
