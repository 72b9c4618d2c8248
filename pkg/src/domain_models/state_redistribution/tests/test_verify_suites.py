import math
import unittest
from typing import Any, Dict

import numpy as np
from pydantic import ValidationError

from domain_models.state_redistribution.schemas import CheckReport
from domain_models.state_redistribution.verify import (
    CheckerFactory,
    SuiteOrchestrator,
    asymptotic_sweep,
    check_comparison_chain,
    check_convex_split,
    check_dh_chain,
    check_fidelity_monotonicity,
    check_gentle,
    check_hayashi_nagaoka,
    check_pgm,
    check_purified_triangle,
    check_spread_inequality,
    run_suite,
)
from domain_models.state_redistribution.verify.checkers.entropy_chains import fidelity_test_construction
from domain_models.state_redistribution.verify.contracts.base_checker import BaseChecker
from domain_models.state_redistribution.verify.generators import random_density, random_mixed_state
from shared_libs.configs.config_loader import set_settings
from shared_libs.configs.schemas.lab_config import LabSettings, VerifyConfig
from shared_libs.quantum.states import bell_pair, permute_registers, trivial_register
from shared_libs.utils.exceptions import ContractViolationError, ParameterError, SupportViolationError

KET_ZERO = np.diag([1.0, 0.0]).astype(complex)
KET_PLUS = 0.5 * np.ones((2, 2), dtype=complex)


class _FlakyChecker(BaseChecker):
    """Raises on odd seeds so the orchestrator has something to collect."""
    name = "flaky"

    def evaluate(self, value: float) -> CheckReport:
        return CheckReport.scalar(self.name, value, 1.0, self.slack)

    def generate_inputs(self, rng: np.random.Generator, dim: int) -> Dict[str, Any]:
        return {"value": 0.5}

    def run_trial(self, seed: int, dim: int) -> CheckReport:
        if seed % 2:
            raise ParameterError(f"odd seed {seed}")
        return super().run_trial(seed, dim)


class TestOperatorInequalities(unittest.TestCase):
    def test_hayashi_nagaoka_projector(self):
        report = check_hayashi_nagaoka(np.diag([1.0, 0.0]), np.zeros((2, 2)))
        self.assertTrue(report.passed)
        self.assertEqual(report.kind, "operator")
        self.assertAlmostEqual(report.details["witness"], 0.0, places=12)

    def test_hayashi_nagaoka_rejects_non_contraction(self):
        with self.assertRaises(ContractViolationError):
            check_hayashi_nagaoka(2.0 * np.eye(2), np.zeros((2, 2)))

    def test_gentle_identity(self):
        report = check_gentle(np.eye(2) / 2, np.eye(2))
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.lhs, 1.0, places=12)

    def test_gentle_zero_weight(self):
        with self.assertRaises(ParameterError):
            check_gentle(KET_ZERO, np.diag([0.0, 1.0]))

    def test_pgm_orthogonal_states(self):
        report = check_pgm([(0.5, KET_ZERO), (0.5, np.diag([0.0, 1.0]))])
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.rhs, 1.0, places=10)

    def test_pgm_probabilities_must_sum_to_one(self):
        with self.assertRaises(ParameterError):
            check_pgm([(0.5, KET_ZERO), (0.2, KET_PLUS)])


class TestEntropyChains(unittest.TestCase):
    def test_dh_chain_equal_states(self):
        rho = np.diag([0.7, 0.3]).astype(complex)
        report = check_dh_chain(rho, rho, 0.3)
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.details["dh_zero"], 0.0, places=12)

    def test_dh_chain_pure_pair(self):
        report = check_dh_chain(KET_ZERO, KET_PLUS, 0.3)
        self.assertTrue(report.passed, msg=report.details)
        self.assertAlmostEqual(report.details["d_half"], 1.0, places=12)

    def test_dh_chain_rejects_zero_eps(self):
        with self.assertRaises(ParameterError):
            check_dh_chain(KET_ZERO, KET_PLUS, 0.0)

    def test_construction_meets_type_one_target(self):
        rng = np.random.default_rng(17)
        rho1, rho2 = random_density(rng, 3), random_density(rng, 3)
        construction = fidelity_test_construction(rho1, rho2, 0.3)
        self.assertLessEqual(construction["p"], construction["p_cap"])
        self.assertGreaterEqual(construction["type_one"], 0.7 - 1e-8)
        self.assertLessEqual(construction["type_two"], 4 * construction["fidelity"] ** 2 / 0.3 + 1e-9)

    def test_comparison_chain_bell(self):
        phi = bell_pair(("R", "C")).tensor(trivial_register("A")).tensor(trivial_register("B"))
        phi = permute_registers(phi, ["R", "A", "B", "C"])
        report = check_comparison_chain(phi)
        self.assertTrue(report.passed, msg=report.details)
        self.assertAlmostEqual(report.details["dmax"], 2.0, places=9)

    def test_spread_bell(self):
        phi = bell_pair(("R", "C")).tensor(trivial_register("A"))
        report = check_spread_inequality(phi)
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.lhs, 2.0, places=10)
        self.assertAlmostEqual(report.rhs, 2.0, places=10)


class TestStateProperties(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(5)

    def test_convex_split_unsmoothed_and_smoothed(self):
        rho_pq = random_mixed_state(self.rng, [("P", 2), ("Q", 2)])
        self.assertTrue(check_convex_split(rho_pq, None, 4).passed)
        smoothed = check_convex_split(rho_pq, None, 4, smoothed_eps=0.1)
        self.assertTrue(smoothed.passed)
        self.assertIn("k_smooth", smoothed.details)

    def test_monotonicity_and_triangle(self):
        registers = [("A", 2), ("B", 2)]
        rho, sigma = random_mixed_state(self.rng, registers), random_mixed_state(self.rng, registers)
        self.assertTrue(check_fidelity_monotonicity(rho, sigma).passed)
        a, b, c = (random_density(self.rng, 3) for _ in range(3))
        self.assertTrue(check_purified_triangle(a, b, c).passed)


class TestCheckReport(unittest.TestCase):
    def test_pass_flag_must_match_sides(self):
        with self.assertRaises(ValidationError):
            CheckReport(check_name="x", lhs=2.0, rhs=1.0, slack=0.0, passed=True)

    def test_pass_alias_in_dump(self):
        dumped = CheckReport.scalar("x", 0.0, 1.0, 1e-9).model_dump(by_alias=True)
        self.assertTrue(dumped["pass"])


class TestSuites(unittest.TestCase):
    """Seeded batches through the factory and the orchestrator."""

    def tearDown(self):
        set_settings(None)

    def test_factory_lists_all_suites(self):
        names = CheckerFactory().available()
        for name in ("hayashi-nagaoka", "gentle", "pgm", "dh-chain", "comparison", "spread",
                     "convex-split", "monotonicity", "triangle"):
            self.assertIn(name, names)

    def test_factory_unknown_name(self):
        with self.assertRaises(ParameterError):
            CheckerFactory().build("does-not-exist")

    def test_hayashi_nagaoka_suite(self):
        report = run_suite("hayashi-nagaoka", trials=20, seed=7, dims=[2, 3, 4])
        self.assertTrue(report.passed)
        self.assertEqual(report.trials, 20)
        self.assertEqual(report.failures, [])

    def test_suites_are_reproducible(self):
        first = run_suite("gentle", trials=6, seed=3, dims=[2, 3])
        second = run_suite("gentle", trials=6, seed=3, dims=[2, 3], max_workers=1)
        self.assertEqual(first.max_violation, second.max_violation)

    def test_small_batches_of_every_suite(self):
        for name in ("pgm", "dh-chain", "comparison", "spread", "convex-split", "monotonicity", "triangle"):
            report = run_suite(name, trials=3, seed=11, dims=[2, 3])
            self.assertTrue(report.passed, msg=f"{name}: {report.failures} {report.errors}")

    def test_checkers_do_not_hold_thread_pools(self):
        factory = CheckerFactory()
        for name in factory.available():
            self.assertFalse(hasattr(factory.build(name), "executor"), msg=name)

    def test_orchestrator_collects_errors(self):
        report = SuiteOrchestrator(_FlakyChecker(slack=1e-9), max_workers=2).run(4, 0, [2])
        self.assertFalse(report.passed)
        self.assertEqual([e["seed"] for e in report.errors], [1, 3])
        self.assertEqual(report.errors[0]["error"], "ParameterError")

    def test_orchestrator_rejects_zero_trials(self):
        with self.assertRaises(ParameterError):
            SuiteOrchestrator(_FlakyChecker()).run(0, 0, [2])


class TestAsymptoticSweep(unittest.TestCase):
    def setUp(self):
        self.rho = np.diag([0.7, 0.3]).astype(complex)
        self.sigma = np.diag([0.4, 0.6]).astype(complex)

    def tearDown(self):
        set_settings(None)

    def test_commuting_pair_matches_oracle(self):
        report = asymptotic_sweep(self.rho, self.sigma, 0.3, 6)
        self.assertTrue(report.commuting)
        self.assertFalse(report.truncated)
        self.assertEqual([p.n for p in report.points], list(range(1, 7)))
        for point in report.points:
            self.assertLessEqual(point.oracle_error, 1e-8)
        self.assertTrue(report.passed)

    def test_equal_states(self):
        report = asymptotic_sweep(self.rho, self.rho, 0.3, 3)
        for point in report.points:
            self.assertAlmostEqual(point.value, -math.log2(0.7), places=8)
            self.assertAlmostEqual(point.reference, 0.0, places=12)

    def test_truncation_note(self):
        set_settings(LabSettings(verify=VerifyConfig(sweep_max_dim=16)))
        report = asymptotic_sweep(self.rho, self.sigma, 0.3, 12)
        self.assertTrue(report.truncated)
        self.assertEqual(report.points[-1].n, 4)
        self.assertTrue(any("truncated" in note for note in report.notes))

    def test_infinite_divergence(self):
        with self.assertRaises(SupportViolationError):
            asymptotic_sweep(np.eye(2) / 2, KET_ZERO, 0.3, 2)

    def test_eps_range(self):
        with self.assertRaises(ParameterError):
            asymptotic_sweep(self.rho, self.sigma, 1.0, 2)


if __name__ == '__main__':
    unittest.main()
