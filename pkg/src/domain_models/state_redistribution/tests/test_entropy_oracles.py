import itertools
import math
import unittest

import numpy as np

from domain_models.state_redistribution.verify import CheckerFactory, run_suite
from domain_models.state_redistribution.verify.generators import random_density, random_mixed_state, random_pure
from shared_libs.configs.config_loader import set_settings
from shared_libs.configs.schemas.lab_config import LabSettings, SolverConfig
from shared_libs.quantum import linalg
from shared_libs.quantum.entropies import (
    classical_dh_lp,
    dh_eps,
    dmax,
    hmax_cond,
    hmin_cond,
    imax,
    min_trace_dominating,
    purified_distance,
    relative_entropy,
    smooth_dmax,
)
from shared_libs.quantum.states import bell_pair
from shared_libs.utils.exceptions import ConvergenceError

PAULIS = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)
GRID_OFFSETS = np.array(list(itertools.product(range(-5, 6), repeat=3)), dtype=float)


def _probability_vector(rng: np.random.Generator, d: int) -> np.ndarray:
    p = rng.uniform(0.05, 1.0, size=d)
    return p / p.sum()


def _greedy_dh(p: np.ndarray, q: np.ndarray, eps: float) -> float:
    """Neyman-Pearson by hand: fill the test in decreasing p/q order until Tr(Pi rho) = 1 - eps."""
    need, cost = 1.0 - eps, 0.0
    for i in np.argsort(-p / q):
        take = min(1.0, need / p[i])
        cost += take * q[i]
        need -= take * p[i]
        if need <= 0.0:
            break
    return -math.log2(cost)


def _pure_state_hmin(psi, a, b) -> float:
    """-2 log2 Tr sqrt(rho_A) for a pure rho_AB."""
    values = np.clip(np.linalg.eigvalsh(psi.marginal(a).matrix), 0.0, None)
    return -2.0 * math.log2(float(np.sum(np.sqrt(values))))


def _dominance_levels(rho_ab: np.ndarray, points: np.ndarray) -> np.ndarray:
    """max{g : g rho_AB <= I (x) sigma(r)} for qubit sigma with Bloch vectors r."""
    sigmas = 0.5 * (np.eye(2) + np.einsum("ni,ijk->njk", points, PAULIS))
    w, v = np.linalg.eigh(sigmas)
    inv_sqrt = np.einsum("nij,nj,nkj->nik", v, 1.0 / np.sqrt(w), v.conj())
    lift = np.zeros((len(points), 4, 4), dtype=complex)
    lift[:, :2, :2] = inv_sqrt
    lift[:, 2:, 2:] = inv_sqrt
    return 1.0 / np.linalg.eigvalsh(lift @ rho_ab @ lift)[:, -1]


def _bloch_grid_hmin(rho_ab: np.ndarray) -> float:
    """Refining grid search over the Bloch ball; g is concave in sigma, so local refinement finds the max."""
    center, step, best = np.zeros(3), 0.2, -math.inf
    while step > 1e-5:
        for _ in range(200):
            points = center + step * GRID_OFFSETS
            points = points[np.linalg.norm(points, axis=1) <= 0.999]
            levels = _dominance_levels(rho_ab, points)
            i = int(np.argmax(levels))
            if levels[i] <= best:
                break
            center, best = points[i], float(levels[i])
        step /= 4.0
    return math.log2(best)


class TestCommutingOracles(unittest.TestCase):
    """D_H and D_max on diagonal pairs against classical oracles."""

    def test_dh_and_dmax_on_random_diagonal_pairs(self):
        for seed in range(200):
            rng = np.random.default_rng(seed)
            d = int(rng.integers(2, 9))
            p, q = _probability_vector(rng, d), _probability_vector(rng, d)
            eps = float(rng.uniform(0.05, 0.95))
            value = dh_eps(np.diag(p), np.diag(q), eps).bits
            self.assertLess(abs(value - _greedy_dh(p, q, eps)), 1e-8, msg=f"seed {seed}")
            self.assertLess(abs(value - classical_dh_lp(p, q, eps)), 1e-8, msg=f"seed {seed}")
            self.assertLess(abs(dmax(np.diag(p), np.diag(q)).bits - math.log2(np.max(p / q))), 1e-10,
                            msg=f"seed {seed}")

    def test_fixed_instance(self):
        p, q = np.array([0.7, 0.3]), np.array([0.4, 0.6])
        self.assertAlmostEqual(_greedy_dh(p, q, 0.25), 1.0, places=12)
        self.assertAlmostEqual(dh_eps(np.diag(p), np.diag(q), 0.25).bits, 1.0, places=9)


class TestHypothesisTestingInvariants(unittest.TestCase):
    def test_tracing_out_never_increases_dh(self):
        for seed in range(30):
            rng = np.random.default_rng(seed)
            rho, sigma = random_density(rng, 4), random_density(rng, 4)
            eps = float(rng.uniform(0.05, 0.9))
            joint = dh_eps(rho, sigma, eps).bits
            local = dh_eps(linalg.partial_trace(rho, [2, 2], [0]), linalg.partial_trace(sigma, [2, 2], [0]), eps).bits
            self.assertLessEqual(local, joint + 1e-8, msg=f"seed {seed}")

    def test_appending_a_fixed_state_never_increases_dh(self):
        for seed in range(30):
            rng = np.random.default_rng(seed)
            rho, sigma, tau = random_density(rng, 3), random_density(rng, 3), random_density(rng, 2)
            eps = float(rng.uniform(0.05, 0.9))
            extended = dh_eps(np.kron(rho, tau), np.kron(sigma, tau), eps).bits
            self.assertLessEqual(extended, dh_eps(rho, sigma, eps).bits + 1e-8, msg=f"seed {seed}")

    def test_dh_nondecreasing_in_eps(self):
        grid = [0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9]
        for seed in range(20):
            rng = np.random.default_rng(seed)
            d = int(rng.integers(2, 6))
            rho, sigma = random_density(rng, d), random_density(rng, d)
            values = [dh_eps(rho, sigma, eps).bits for eps in grid]
            for lower, upper in zip(values, values[1:]):
                self.assertLessEqual(lower, upper + 1e-9, msg=f"seed {seed}: {values}")

    def test_dmax_above_relative_entropy_above_zero(self):
        for seed in range(50):
            rng = np.random.default_rng(seed)
            d = int(rng.integers(2, 6))
            rho, sigma = random_density(rng, d), random_density(rng, d)
            rel = relative_entropy(rho, sigma).bits
            self.assertGreaterEqual(rel, -1e-8, msg=f"seed {seed}")
            self.assertGreaterEqual(dmax(rho, sigma).bits, rel - 1e-8, msg=f"seed {seed}")


class TestConditionalEntropySolver(unittest.TestCase):
    """Barrier solver behind H_min, H_max and I_max."""

    def tearDown(self):
        set_settings(None)

    def test_bell_state(self):
        self.assertLess(abs(hmin_cond(bell_pair(("A", "B")), ["A"], ["B"]).bits + 1.0), 1e-6)

    def test_pure_state_duality(self):
        for seed in range(100):
            rng = np.random.default_rng(seed)
            d_a, d_b = 2 + seed % 2, 2 + (seed // 2) % 2
            psi = random_pure(rng, [("A", d_a), ("B", d_b)])
            result = hmin_cond(psi, ["A"], ["B"])
            self.assertLess(abs(result.bits - _pure_state_hmin(psi, ["A"], ["B"])), 1e-6,
                            msg=f"seed {seed}, dims {d_a}x{d_b}")
            self.assertLessEqual(result.solver_report.final_gap, 1e-7)

    def test_qutrit_pairs(self):
        for seed in range(100, 130):
            psi = random_pure(np.random.default_rng(seed), [("A", 3), ("B", 3)])
            self.assertLess(abs(hmin_cond(psi, ["A"], ["B"]).bits - _pure_state_hmin(psi, ["A"], ["B"])), 1e-6,
                            msg=f"seed {seed}")

    def test_bloch_grid_on_mixed_states(self):
        for seed in range(20):
            state = random_mixed_state(np.random.default_rng(seed), [("A", 2), ("B", 2)])
            value = hmin_cond(state, ["A"], ["B"]).bits
            grid = _bloch_grid_hmin(state.matrix)
            self.assertLessEqual(grid, value + 1e-6, msg=f"seed {seed}")
            self.assertGreaterEqual(grid, value - 1e-3, msg=f"seed {seed}")

    def test_min_entropy_below_max_entropy(self):
        for seed in range(15):
            rng = np.random.default_rng(seed)
            state = random_mixed_state(rng, [("A", 2), ("B", 2 + seed % 2)])
            self.assertLessEqual(hmin_cond(state, ["A"], ["B"]).bits,
                                 hmax_cond(state, ["A"], ["B"]).bits + 1e-6, msg=f"seed {seed}")

    def test_max_information_below_product_dmax(self):
        for seed in range(20):
            state = random_mixed_state(np.random.default_rng(seed), [("A", 2), ("B", 2)])
            product = np.kron(state.marginal(["A"]).matrix, state.marginal(["B"]).matrix)
            self.assertLessEqual(imax(state, ["A"], ["B"]).bits, dmax(state.matrix, product).bits + 1e-6,
                                 msg=f"seed {seed}")

    def test_comparison_trials_at_the_roundoff_floor(self):
        checker = CheckerFactory().build("comparison")
        for seed in (35, 54, 119, 172, 178):
            report = checker.run_trial(seed, 2)
            self.assertTrue(report.passed, msg=f"seed {seed}: {report.details}")

    def test_comparison_suite_as_shipped(self):
        report = run_suite("comparison", trials=200, seed=0, dims=[2])
        self.assertEqual(report.errors, [])
        self.assertTrue(report.passed, msg=f"{report.failures}")

    def test_iteration_cap_without_certified_gap_raises(self):
        set_settings(LabSettings(solver=SolverConfig(max_newton_iterations=3)))
        rho = bell_pair(("A", "B")).marginal(["A", "B"]).matrix
        with self.assertRaises(ConvergenceError) as ctx:
            min_trace_dominating(rho, 2, 2)
        self.assertEqual(ctx.exception.iterations, 3)
        self.assertIsNotNone(ctx.exception.best_bound)
        self.assertGreater(ctx.exception.details["relative_gap"], 1e-7)


class TestSmoothedDmax(unittest.TestCase):
    def test_spiked_state_is_lowered_by_smoothing(self):
        rho = np.diag([0.9, 0.1]).astype(complex)
        sigma = np.eye(2, dtype=complex) / 2
        plain = dmax(rho, sigma).bits
        smoothed = smooth_dmax(rho, sigma, 0.1)
        # p = 0.1 toward I/2 already stays within distance 0.1 and gives log2(1.72)
        self.assertLessEqual(smoothed.bits, math.log2(1.72) + 1e-9)
        self.assertLess(smoothed.bits, plain - 0.05)
        self.assertLessEqual(purified_distance(smoothed.certificate, rho), 0.1 + 1e-12)

    def test_zero_eps_equals_dmax(self):
        rho = np.diag([0.9, 0.1]).astype(complex)
        sigma = np.diag([0.3, 0.7]).astype(complex)
        self.assertAlmostEqual(smooth_dmax(rho, sigma, 0.0).bits, dmax(rho, sigma).bits, places=12)


if __name__ == '__main__':
    unittest.main()
