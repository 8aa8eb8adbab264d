#!/usr/bin/env python3
"""
Acceptance-scale experiment runs with their default sizes.

These take minutes each and only run with ``pytest --runslow``.
"""

import unittest

import pytest

from src.experiments import get_experiment, get_experiment_class
from src.experiments.config import load_config


def run_default(name: str, **overrides):
    config = load_config(None, overrides, experiment=name, defaults=get_experiment_class(name).defaults)
    return get_experiment(name, config).run()


def failed(manifest):
    return [f"{r.name}: {r.notes}" for r in manifest.reports if not r.passed]


@pytest.mark.slow
class TestStationaryAcceptance(unittest.TestCase):
    """Burke property, time reversal and duality at full size"""

    def test_burke(self):
        manifest = run_default("burke")
        self.assertTrue(manifest.passed, failed(manifest))

    def test_reverse(self):
        manifest = run_default("reverse")
        self.assertTrue(manifest.passed, failed(manifest))

    def test_duality(self):
        manifest = run_default("duality")
        self.assertTrue(manifest.passed, failed(manifest))


@pytest.mark.slow
class TestSecondClassAcceptance(unittest.TestCase):
    """Speeds of X, X' and Z and the pathwise coupling checks"""

    def test_scp_speeds(self):
        manifest = run_default("scp")
        self.assertTrue(manifest.passed, failed(manifest))

    def test_flux(self):
        manifest = run_default("flux")
        self.assertTrue(manifest.passed, failed(manifest))

    def test_couplings(self):
        manifest = run_default("couplings")
        self.assertTrue(manifest.passed, failed(manifest))


@pytest.mark.slow
class TestGrowthAcceptance(unittest.TestCase):
    """Ulam constant, local Poisson structure, weak paths and V_t"""

    def test_lis(self):
        manifest = run_default("lis")
        self.assertTrue(manifest.passed, failed(manifest))

    def test_ulam(self):
        manifest = run_default("ulam")
        means = manifest.tables["ulam"]["mean_empty"].tolist()
        self.assertEqual(means, sorted(means))
        self.assertTrue(manifest.passed, failed(manifest))

    def test_local_poisson(self):
        manifest = run_default("local-poisson")
        ks = next(r for r in manifest.reports if r.name == "window gap K-S")
        self.assertTrue(ks.passed, ks.notes)

    def test_weak_path(self):
        manifest = run_default("weak-path")
        self.assertTrue(manifest.passed, failed(manifest))

    def test_vt(self):
        manifest = run_default("vt")
        self.assertTrue(manifest.passed, failed(manifest))


if __name__ == "__main__":
    unittest.main(verbosity=2)
