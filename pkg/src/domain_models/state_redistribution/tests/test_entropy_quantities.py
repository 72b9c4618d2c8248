import math
import unittest

import numpy as np

from shared_libs.quantum.entropies import (
    classical_dh_lp,
    cond_mutual_information,
    d_half,
    dh_eps,
    dmax,
    entanglement_spread,
    fidelity,
    hmax_cond,
    hmin_cond,
    imax,
    information_variance,
    mutual_information,
    purified_distance,
    relative_entropy,
    smooth_dmax,
    spread_ks,
)
from shared_libs.quantum.states import RegisterLayout, basis_state, bell_pair, product, trivial_register
from shared_libs.utils.exceptions import ParameterError

RHO = np.diag([0.7, 0.3]).astype(complex)
SIGMA = np.diag([0.4, 0.6]).astype(complex)
KET_ZERO = np.diag([1.0, 0.0]).astype(complex)
KET_PLUS = 0.5 * np.ones((2, 2), dtype=complex)


class TestDivergences(unittest.TestCase):
    """Closed-form values on commuting qubit pairs."""

    def test_dmax_diagonal(self):
        self.assertAlmostEqual(dmax(RHO, SIGMA).bits, math.log2(1.75), places=10)

    def test_dmax_infinite_outside_support(self):
        result = dmax(np.eye(2) / 2, KET_ZERO)
        self.assertTrue(result.infinite)
        self.assertIsNone(result.value)
        self.assertEqual(result.bits, math.inf)

    def test_relative_entropy_diagonal(self):
        expected = 0.7 * math.log2(0.7 / 0.4) + 0.3 * math.log2(0.3 / 0.6)
        self.assertAlmostEqual(relative_entropy(RHO, SIGMA).bits, expected, places=10)
        self.assertAlmostEqual(relative_entropy(RHO, SIGMA).bits, 0.265148445, places=8)

    def test_dh_matches_neyman_pearson(self):
        # optimal test diag(1, 1/6): Tr(Pi sigma) = 1/2
        self.assertAlmostEqual(dh_eps(RHO, SIGMA, 0.25).bits, 1.0, places=9)

    def test_dh_certificate_saturates_type_one(self):
        result = dh_eps(RHO, SIGMA, 0.25)
        test = result.certificate
        self.assertAlmostEqual(float(np.real(np.trace(test @ RHO))), 0.75, places=9)
        eigs = np.linalg.eigvalsh(test)
        self.assertGreaterEqual(eigs[0], -1e-10)
        self.assertLessEqual(eigs[-1], 1.0 + 1e-10)

    def test_dh_zero_uses_support_projector(self):
        self.assertAlmostEqual(dh_eps(KET_ZERO, KET_PLUS, 0.0).bits, 1.0, places=12)

    def test_dh_rejects_eps_outside_range(self):
        with self.assertRaises(ParameterError):
            dh_eps(RHO, SIGMA, 1.5)
        with self.assertRaises(ParameterError):
            dh_eps(RHO, SIGMA, -0.1)

    def test_dh_agrees_with_linear_program(self):
        lp = classical_dh_lp(np.array([0.7, 0.3]), np.array([0.4, 0.6]), 0.25)
        self.assertAlmostEqual(lp, dh_eps(RHO, SIGMA, 0.25).bits, places=8)

    def test_dh_of_identical_states(self):
        self.assertAlmostEqual(dh_eps(RHO, RHO, 0.3).bits, -math.log2(0.7), places=9)

    def test_fidelity_and_d_half(self):
        self.assertAlmostEqual(fidelity(KET_ZERO, KET_PLUS), 1 / math.sqrt(2), places=12)
        self.assertAlmostEqual(d_half(KET_ZERO, KET_PLUS).bits, 1.0, places=12)
        self.assertAlmostEqual(purified_distance(KET_ZERO, KET_PLUS), 1 / math.sqrt(2), places=12)

    def test_information_variance_of_equal_states_vanishes(self):
        self.assertAlmostEqual(information_variance(RHO, RHO), 0.0, places=12)

    def test_smooth_dmax_never_exceeds_dmax(self):
        self.assertLessEqual(smooth_dmax(RHO, SIGMA, 0.1).bits, dmax(RHO, SIGMA).bits + 1e-12)


class TestConditionalEntropies(unittest.TestCase):
    def setUp(self):
        self.bell = bell_pair(("A", "B"))

    def test_bell_min_entropy(self):
        self.assertAlmostEqual(hmin_cond(self.bell, ["A"], ["B"]).bits, -1.0, places=5)

    def test_bell_max_entropy(self):
        self.assertAlmostEqual(hmax_cond(self.bell, ["A"], ["B"]).bits, -1.0, places=5)

    def test_product_state_min_entropy(self):
        state = product(basis_state(RegisterLayout.of(("A", 2)), 0), basis_state(RegisterLayout.of(("B", 2)), 1))
        self.assertAlmostEqual(hmin_cond(state, ["A"], ["B"]).bits, 0.0, places=5)

    def test_bell_max_information(self):
        self.assertAlmostEqual(imax(self.bell, ["A"], ["B"]).bits, 2.0, places=5)

    def test_bell_mutual_information(self):
        self.assertAlmostEqual(mutual_information(self.bell, ["A"], ["B"]), 2.0, places=10)

    def test_conditional_mutual_information_with_trivial_condition(self):
        state = self.bell.tensor(trivial_register("E"))
        self.assertAlmostEqual(cond_mutual_information(state, ["A"], ["B"], ["E"]), 2.0, places=10)


class TestSpread(unittest.TestCase):
    def test_spread_of_skewed_marginal(self):
        report = entanglement_spread(np.diag([0.5, 0.25, 0.25]))
        self.assertAlmostEqual(report.h0, math.log2(3), places=12)
        self.assertAlmostEqual(report.h_inf, 1.0, places=12)
        self.assertAlmostEqual(report.spread, math.log2(3) - 1.0, places=12)

    def test_bell_ks(self):
        phi = bell_pair(("R", "C")).tensor(trivial_register("A"))
        report = spread_ks(phi, ["R"], ["C"])
        self.assertAlmostEqual(report.k1, 2.0, places=10)
        self.assertAlmostEqual(report.k2, 1.0, places=10)
        self.assertAlmostEqual(report.k3, 1.0, places=10)
        self.assertAlmostEqual(report.k4, 0.0, places=10)
        self.assertAlmostEqual(report.spread, 0.0, places=12)


if __name__ == '__main__':
    unittest.main()
