import math
import unittest

import numpy as np

from domain_models.state_redistribution.protocol import (
    achievable_cost,
    canonical_input,
    exact_mixture_check,
    cost_bound,
    decoding_analysis,
    run_protocol,
    run_protocol_reversed,
)
from domain_models.state_redistribution.protocol.redistribution import asymptotic_cost_trend
from domain_models.state_redistribution.schemas import ProtocolConfig
from shared_libs.configs.config_loader import set_settings
from shared_libs.configs.schemas.lab_config import LabSettings, LinalgConfig, ProtocolDefaults
from shared_libs.quantum.states import PureVector, RegisterLayout, bell_pair, random_pure_vector, trivial_register
from shared_libs.utils.exceptions import DimensionError, ParameterError

STEP_NAMES = ["append_references", "alice_uhlmann", "index_split", "transfer_j1",
              "block_swap", "bob_decoder", "decoder_swap"]


def _two_bell_pairs() -> PureVector:
    """Bell(R:B) (x) Bell(A:C): C is uncorrelated with R given B."""
    return bell_pair(("R", "B")).tensor(bell_pair(("A", "C")))


def _random_four_qubits(seed: int) -> PureVector:
    return random_pure_vector(RegisterLayout.of(("R", 2), ("A", 2), ("B", 2), ("C", 2)), seed)


def _ghz() -> PureVector:
    amps = np.zeros(16, dtype=complex)
    amps[0] = amps[15] = 1 / math.sqrt(2)
    return PureVector(layout=RegisterLayout.of(("R", 2), ("A", 2), ("B", 2), ("C", 2)), amplitudes=amps)


class TestForwardProtocol(unittest.TestCase):
    """Simulated runs of the protocol that hands C from Alice to Bob."""

    def tearDown(self):
        set_settings(None)

    def test_two_bell_pairs_small(self):
        transcript = run_protocol(_two_bell_pairs(), ProtocolConfig(n=4, b=1))
        self.assertEqual(transcript.side, "B")
        self.assertAlmostEqual(transcript.qubits_sent, 1.0, places=12)
        self.assertAlmostEqual(transcript.k, 0.0, places=9)
        self.assertLessEqual(transcript.measured_P, 1e-6)
        self.assertEqual([r.name for r in transcript.step_records], STEP_NAMES)
        self.assertLessEqual(transcript.max_norm_residual, 1e-8)
        self.assertLessEqual(transcript.max_isometry_residual, 1e-8)

    def test_two_bell_pairs_eight_copies(self):
        """n = 8 needs 16 * 4^8 amplitudes, above the default cap."""
        cap = 2 ** 21
        set_settings(LabSettings(linalg=LinalgConfig(max_dim=cap), protocol=ProtocolDefaults(dim_cap=cap)))
        transcript = run_protocol(_two_bell_pairs(), ProtocolConfig(n=8, b=1))
        self.assertAlmostEqual(transcript.qubits_sent, 1.5, places=12)
        self.assertLessEqual(transcript.measured_P, 0.5)
        self.assertEqual(transcript.j1_dim, 8)

    def test_dimension_cap_is_enforced(self):
        with self.assertRaises(DimensionError) as ctx:
            run_protocol(_two_bell_pairs(), ProtocolConfig(n=8, b=1))
        self.assertEqual(ctx.exception.cap, 65536)

    def test_trivial_c_register(self):
        phi = bell_pair(("R", "B")).tensor(trivial_register("A"))
        transcript = run_protocol(phi, ProtocolConfig(n=4, b=1))
        self.assertAlmostEqual(transcript.qubits_sent, 1.0, places=12)
        self.assertLessEqual(transcript.measured_P, 1e-8)

    def test_random_inputs_stay_below_derived_bound(self):
        for seed in range(1, 21):
            transcript = run_protocol(_random_four_qubits(seed), ProtocolConfig(n=6, b=1, seed=seed))
            self.assertLessEqual(transcript.measured_P, transcript.derived_bound + 1e-6, msg=f"seed {seed}")
            self.assertEqual(transcript.guarantee_regime, "trend_only")
            self.assertIsNone(transcript.guaranteed_P)

    def test_more_copies_do_not_hurt(self):
        cap = 2 ** 21
        set_settings(LabSettings(linalg=LinalgConfig(max_dim=cap), protocol=ProtocolDefaults(dim_cap=cap)))
        phi = _random_four_qubits(1)
        six = run_protocol(phi, ProtocolConfig(n=6, b=1, seed=1))
        eight = run_protocol(phi, ProtocolConfig(n=8, b=1, seed=1))
        self.assertLessEqual(eight.measured_P, six.measured_P + 1e-3)

    def test_block_size_above_n_rejected(self):
        with self.assertRaises(ValueError):
            ProtocolConfig(n=2, b=3)

    def test_partition_must_name_four_roles(self):
        with self.assertRaises(ParameterError):
            canonical_input(_two_bell_pairs(), ["R", "A", "B"])

    def test_unassigned_register_rejected(self):
        with self.assertRaises(ParameterError):
            canonical_input(_two_bell_pairs().tensor(trivial_register("E")), ["R", "A", "B", "C"])


class TestReversedProtocol(unittest.TestCase):
    def test_symmetric_input_gives_equal_costs(self):
        phi = _ghz()
        config = ProtocolConfig(n=2, b=1)
        forward = run_protocol(phi, config)
        backward = run_protocol_reversed(phi, config)
        self.assertEqual(backward.side, "A")
        self.assertAlmostEqual(forward.qubits_sent, backward.qubits_sent, places=12)
        self.assertAlmostEqual(cost_bound(phi, config, "B"), cost_bound(phi, config, "A"), places=9)
        self.assertIn("forward_measured_P", backward.notes)

    def test_achievable_cost_is_the_minimum(self):
        phi = _random_four_qubits(9)
        config = ProtocolConfig(n=2, b=1)
        expected = min(cost_bound(phi, config, "B"), cost_bound(phi, config, "A"))
        self.assertAlmostEqual(achievable_cost(phi, config), expected, places=12)

    def test_unknown_side_rejected(self):
        with self.assertRaises(ParameterError):
            cost_bound(_ghz(), ProtocolConfig(), side="C")


class TestSubChecks(unittest.TestCase):
    def test_exact_mixture_distance_bound(self):
        for seed in range(1, 21):
            report = exact_mixture_check(_random_four_qubits(seed), ProtocolConfig(n=2, b=1, seed=seed))
            self.assertTrue(report.passed, msg=f"seed {seed}: {report.details}")

    def test_decoding_analysis_bounds(self):
        analysis = decoding_analysis(_random_four_qubits(6), ProtocolConfig(n=2, b=2), b=2)
        self.assertEqual(analysis.b, 2)
        self.assertTrue(analysis.fidelity_bound_holds)
        self.assertTrue(analysis.error_bound_holds)
        self.assertLessEqual(analysis.hn_exact, analysis.hn_stated + 1e-9)

    def test_cost_trend_points(self):
        points = asymptotic_cost_trend(_two_bell_pairs(), n_max=2)
        self.assertEqual([p.n for p in points], [1, 2])
        for p in points:
            self.assertAlmostEqual(p.reference, 0.0, places=9)


if __name__ == '__main__':
    unittest.main()
