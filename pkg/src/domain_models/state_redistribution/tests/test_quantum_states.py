import unittest

import numpy as np

from shared_libs.quantum.states import (
    PureVector,
    QuantumState,
    RegisterLayout,
    apply_operator,
    bell_pair,
    controlled_swap,
    maximally_mixed,
    permute_registers,
    purify,
    random_state,
    swap_registers,
    trivial_register,
    uhlmann_isometry,
)
from shared_libs.utils.exceptions import ContractViolationError, DimensionError, NotPSDError


class TestStateContracts(unittest.TestCase):
    """Construction-time validation of density operators and pure vectors."""

    def test_trace_must_be_one(self):
        with self.assertRaises(ContractViolationError) as ctx:
            QuantumState.from_matrix(np.diag([0.6, 0.3]), ("A", 2))
        self.assertIn("trace", str(ctx.exception))

    def test_negative_eigenvalue_rejected(self):
        with self.assertRaises(NotPSDError):
            QuantumState.from_matrix(np.diag([1.1, -0.1]), ("A", 2))

    def test_layout_must_match(self):
        with self.assertRaises(DimensionError):
            QuantumState.from_matrix(np.eye(3) / 3, ("A", 2))

    def test_pure_vector_norm(self):
        with self.assertRaises(ContractViolationError):
            PureVector(layout=RegisterLayout.of(("A", 2)), amplitudes=np.array([1.0, 1.0]))

    def test_duplicate_labels_rejected(self):
        with self.assertRaises(ValueError):
            RegisterLayout.of(("A", 2), ("A", 2))


class TestRegisterOperations(unittest.TestCase):
    def setUp(self):
        self.phi = random_state(RegisterLayout.of(("A", 2), ("B", 3)), "pure_haar", seed=11)

    def test_random_state_is_reproducible(self):
        again = random_state(RegisterLayout.of(("A", 2), ("B", 3)), "pure_haar", seed=11)
        np.testing.assert_array_equal(self.phi.matrix, again.matrix)

    def test_bell_marginal_is_maximally_mixed(self):
        np.testing.assert_allclose(bell_pair(("R", "C")).marginal(["C"]).matrix, np.eye(2) / 2, atol=1e-14)

    def test_permute_registers_keeps_marginals(self):
        swapped = permute_registers(self.phi, ["B", "A"])
        self.assertEqual(swapped.layout.labels, ["B", "A"])
        np.testing.assert_allclose(swapped.marginal(["A"]).matrix, self.phi.marginal(["A"]).matrix, atol=1e-12)

    def test_trivial_register_is_inert(self):
        extended = bell_pair().tensor(trivial_register("C"))
        self.assertEqual(extended.layout.dim_of("C"), 1)
        np.testing.assert_allclose(extended.marginal(["C"]).matrix, [[1.0]], atol=1e-14)

    def test_swap_registers_exchanges_contents(self):
        layout = RegisterLayout.of(("X", 2), ("Y", 2))
        psi = PureVector(layout=layout, amplitudes=np.array([0, 1, 0, 0]))   # |0>_X |1>_Y
        swapped = swap_registers(psi, [("X", "Y")])
        np.testing.assert_allclose(swapped.amplitudes, [0, 0, 1, 0], atol=1e-14)

    def test_controlled_swap_acts_per_branch(self):
        layout = RegisterLayout.of(("K", 2), ("X", 2), ("Y", 2))
        amps = np.zeros(8)
        amps[0b001] = amps[0b101] = 1 / np.sqrt(2)    # (|0>+|1>)_K |0>_X |1>_Y
        out = controlled_swap(PureVector(layout=layout, amplitudes=amps), "K", {1: [("X", "Y")]})
        expected = np.zeros(8)
        expected[0b001] = expected[0b110] = 1 / np.sqrt(2)
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-14)

    def test_apply_operator_replaces_register(self):
        flip = np.array([[0, 1], [1, 0]], dtype=complex)
        psi = PureVector(layout=RegisterLayout.of(("A", 2), ("B", 2)), amplitudes=np.array([1, 0, 0, 0]))
        out = apply_operator(psi, flip, ["B"], RegisterLayout.of(("B2", 2)))
        self.assertEqual(out.layout.labels, ["A", "B2"])
        np.testing.assert_allclose(out.amplitudes, [0, 1, 0, 0], atol=1e-14)


class TestPurificationAndUhlmann(unittest.TestCase):
    def test_purification_reproduces_marginal(self):
        rho = random_state(RegisterLayout.of(("A", 3)), "mixed_ginibre", seed=5)
        psi = purify(rho)
        self.assertEqual(psi.layout.labels, ["A", "P"])
        np.testing.assert_allclose(psi.marginal(["A"]).matrix, rho.matrix, atol=1e-12)

    def test_purification_ancilla_has_rank_dimension(self):
        rho = QuantumState.from_matrix(np.diag([0.5, 0.5, 0.0]), ("A", 3))
        self.assertEqual(purify(rho).layout.dim_of("P"), 2)

    def test_uhlmann_reaches_fidelity(self):
        """Two purifications of the same marginal are connected with overlap 1."""
        rho = maximally_mixed(RegisterLayout.of(("X", 2)))
        a = purify(rho, "Y")
        b = bell_pair(("X", "Z"))
        result = uhlmann_isometry(a, b, ["X"])
        self.assertAlmostEqual(result.overlap, 1.0, places=12)
        v = result.matrix
        np.testing.assert_allclose(v.conj().T @ v, np.eye(v.shape[1]), atol=1e-12)

    def test_uhlmann_shared_dims_must_agree(self):
        with self.assertRaises(DimensionError):
            uhlmann_isometry(bell_pair(("X", "Y")), PureVector(RegisterLayout.of(("X", 3)), np.array([1, 0, 0])), ["X"])


if __name__ == '__main__':
    unittest.main()
