import io
import os
import shutil
import tempfile
import unittest
from unittest.mock import patch

import numpy as np

from domain_models.state_redistribution.services import load_report, save_state
from scripts.run_qsrlab import EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_NUMERIC_ERROR, EXIT_OK, run_command
from shared_libs.configs.config_loader import installed_settings
from shared_libs.quantum.states import QuantumState, bell_pair
from shared_libs.utils.exceptions import ConvergenceError


class TestRunCommand(unittest.TestCase):
    """End-to-end runs of the command line on temporary state files."""

    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.rho = os.path.join(self.tmp, "rho.json")
        self.sigma = os.path.join(self.tmp, "sigma.json")
        self.phi = os.path.join(self.tmp, "phi.json")
        save_state(QuantumState.from_matrix(np.diag([0.7, 0.3]), ("A", 2)), self.rho)
        save_state(QuantumState.from_matrix(np.diag([0.4, 0.6]), ("A", 2)), self.sigma)
        save_state(bell_pair(("R", "B")).tensor(bell_pair(("A", "C"))), self.phi)

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def _run(self, *argv):
        out = io.StringIO()
        code, report = run_command(list(argv), stdout=out)
        return code, report, out.getvalue().splitlines()

    def test_entropy_dmax(self):
        code, report, lines = self._run("entropy", "--in", self.rho, "--sigma", self.sigma, "--quantity", "dmax")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(lines[0].startswith("0.80735492205"))
        self.assertEqual(report.exit_code, EXIT_OK)

    def test_entropy_dh(self):
        code, _, lines = self._run("entropy", "--in", self.rho, "--sigma", self.sigma,
                                   "--quantity", "dh", "--eps", "0.25")
        self.assertEqual(code, EXIT_OK)
        self.assertAlmostEqual(float(lines[0]), 1.0, places=9)

    def test_entropy_eps_out_of_range(self):
        code, report, _ = self._run("entropy", "--in", self.rho, "--sigma", self.sigma,
                                    "--quantity", "dh", "--eps", "1.5")
        self.assertEqual(code, EXIT_INPUT_ERROR)
        self.assertEqual(report.results["error"], "ParameterError")

    def test_unknown_flag(self):
        code, _, _ = self._run("entropy", "--in", self.rho, "--bogus")
        self.assertEqual(code, EXIT_INPUT_ERROR)

    def test_missing_state_file(self):
        code, _, _ = self._run("entropy", "--in", os.path.join(self.tmp, "absent.json"), "--quantity", "dmax",
                               "--sigma", self.sigma)
        self.assertEqual(code, EXIT_INPUT_ERROR)

    def test_verify_hayashi_nagaoka(self):
        code, report, lines = self._run("verify", "--suite", "hayashi-nagaoka", "--trials", "100", "--seed", "7")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(lines[0].startswith("hayashi-nagaoka: PASS trials=100"))
        self.assertEqual(report.seed, 7)

    def test_protocol_writes_report(self):
        out_path = os.path.join(self.tmp, "run.json")
        code, _, lines = self._run("--out", out_path, "protocol", "--in", self.phi, "--n", "2", "--b", "1")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("qubits_sent=0.5", lines)
        saved = load_report(out_path)
        self.assertEqual(saved["exit_code"], EXIT_OK)
        self.assertEqual(saved["results"]["side"], "B")
        self.assertIn("settings", saved["config"])

    def test_cost_prints_both_sides(self):
        code, _, lines = self._run("cost", "--in", self.phi)
        self.assertEqual(code, EXIT_OK)
        self.assertEqual([line.split("=")[0] for line in lines], ["B", "A", "achievable"])

    def test_sweep(self):
        code, report, lines = self._run("sweep", "--in", self.rho, "--sigma", self.sigma, "--eps", "0.3", "--n-max", "3")
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(lines[-1], "PASS")

    def test_numeric_error_exit_code(self):
        with patch("domain_models.state_redistribution.services.lab_service.LabService.entropy",
                   side_effect=ConvergenceError("barrier stalled", iterations=500)):
            code, report, _ = self._run("entropy", "--in", self.rho, "--quantity", "hmin")
        self.assertEqual(code, EXIT_NUMERIC_ERROR)
        self.assertEqual(report.results["error"], "ConvergenceError")

    def test_unexpected_error_exit_code(self):
        with patch("domain_models.state_redistribution.services.lab_service.LabService.entropy",
                   side_effect=RuntimeError("boom")):
            code, report, _ = self._run("entropy", "--in", self.rho, "--sigma", self.sigma, "--quantity", "dmax")
        self.assertEqual(code, EXIT_NUMERIC_ERROR)
        self.assertEqual(report.results["error"], "RuntimeError")
        self.assertIsNone(installed_settings())

    def test_spread_with_three_groups_is_an_input_error(self):
        code, _, _ = self._run("entropy", "--in", self.phi, "--quantity", "spread", "--partition", "R,B,C")
        self.assertEqual(code, EXIT_INPUT_ERROR)

    def test_failed_check_exit_code(self):
        with patch("domain_models.state_redistribution.services.lab_service.LabService.verify",
                   return_value=([], False)):
            code, _, _ = self._run("verify", "--suite", "gentle", "--trials", "1")
        self.assertEqual(code, EXIT_CHECK_FAILED)

    def test_config_flag_does_not_leak(self):
        config_path = os.path.join(self.tmp, "lab.yaml")
        with open(config_path, "w") as f:
            f.write("LAB_CONFIG:\n  protocol:\n    dim_cap: 128\n")
        code, _, _ = self._run("--config", config_path, "protocol", "--in", self.phi, "--n", "4", "--b", "1")
        self.assertEqual(code, EXIT_INPUT_ERROR)
        self.assertIsNone(installed_settings())


if __name__ == '__main__':
    unittest.main()
