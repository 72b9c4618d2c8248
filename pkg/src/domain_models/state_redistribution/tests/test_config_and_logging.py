import json
import logging
import os
import shutil
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from shared_libs.configs.config_loader import ConfigLoader, get_settings, set_settings
from shared_libs.configs.schemas import SchemaRegistry, SolverConfig
from shared_libs.utils.exceptions import ConfigurationError
from shared_libs.utils.logging_utils import JsonFormatter, log_event

REPO_ROOT = Path(__file__).resolve().parents[4]
LAB_CONFIG = str(REPO_ROOT / "configs" / "lab" / "lab_config.yaml")
SUITE_CONFIG = str(REPO_ROOT / "configs" / "verify" / "suite_config.yaml")


class TestConfigLoader(unittest.TestCase):
    def setUp(self):
        self.loader = ConfigLoader(base_config_dir=str(REPO_ROOT / "configs"))
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)
        set_settings(None)

    def _write(self, name: str, text: str) -> str:
        path = os.path.join(self.tmp, name)
        with open(path, "w") as f:
            f.write(text)
        return path

    def test_shipped_lab_config(self):
        settings = self.loader.get_lab_settings(LAB_CONFIG)
        self.assertEqual(settings.protocol.dim_cap, 65536)
        self.assertEqual(settings.linalg.eig_backend, "lapack")
        self.assertEqual(settings.verify.suite_slack["comparison"], 1e-6)

    def test_relative_path_uses_base_dir(self):
        self.assertEqual(self.loader.get_lab_settings("lab/lab_config.yaml").verify.sweep_max_dim, 512)

    def test_single_section(self):
        solver = self.loader.get_lab_section(LAB_CONFIG, "solver")
        self.assertIsInstance(solver, SolverConfig)
        self.assertEqual(solver.bisection_iterations, 200)

    def test_unknown_section(self):
        with self.assertRaises(ConfigurationError):
            self.loader.get_lab_section(LAB_CONFIG, "network")
        with self.assertRaises(ValueError):
            SchemaRegistry.get_lab_section_schema("network")

    def test_shipped_suite_config(self):
        suites = self.loader.get_suite_config(SUITE_CONFIG)
        self.assertEqual(suites.get("hayashi-nagaoka").trials, 1000)
        self.assertIsNone(suites.get("missing"))

    def test_invalid_values(self):
        path = self._write("bad.yaml", "LAB_CONFIG:\n  linalg:\n    eig_backend: magma\n")
        with self.assertRaises(ConfigurationError):
            self.loader.get_lab_settings(path)

    def test_broken_yaml(self):
        path = self._write("broken.yaml", "LAB_CONFIG: [unclosed\n")
        with self.assertRaises(ConfigurationError):
            self.loader.get_lab_settings(path)

    def test_missing_file(self):
        with self.assertRaises(ConfigurationError):
            self.loader.load_yaml(os.path.join(self.tmp, "absent.yaml"))

    def test_suite_key_required(self):
        path = self._write("suites.yaml", "SUITES: []\n")
        with self.assertRaises(ConfigurationError):
            self.loader.get_suite_config(path)

    @patch.dict(os.environ, {"QSRLAB_DIM_CAP": "1048576"})
    def test_dim_cap_from_environment(self):
        settings = get_settings()
        self.assertEqual(settings.protocol.dim_cap, 1048576)
        self.assertEqual(settings.linalg.max_dim, 1048576)

    @patch.dict(os.environ, {"QSRLAB_DIM_CAP": "lots"})
    def test_bad_dim_cap(self):
        with self.assertRaises(ConfigurationError):
            get_settings()

    def test_installed_settings_win(self):
        settings = self.loader.get_lab_settings(self._write("small.yaml", "LAB_CONFIG:\n  verify:\n    max_workers: 1\n"))
        set_settings(settings)
        self.assertEqual(get_settings().verify.max_workers, 1)
        set_settings(None)
        self.assertEqual(get_settings().verify.max_workers, 4)


class TestJsonLogging(unittest.TestCase):
    def test_event_fields_reach_the_formatter(self):
        logger = logging.getLogger("qsrlab.test")
        records = []
        handler = logging.Handler()
        handler.emit = records.append
        logger.addHandler(handler)
        logger.setLevel(logging.INFO)
        try:
            log_event(logger, "Suite finished", "suite_completed", {"trials": 3})
        finally:
            logger.removeHandler(handler)

        payload = json.loads(JsonFormatter().format(records[0]))
        self.assertEqual(payload["message"], "Suite finished")
        self.assertEqual(payload["event_type"], "suite_completed")
        self.assertEqual(payload["data"], {"trials": 3})
        self.assertEqual(payload["level"], "INFO")

    def test_plain_records_are_generic(self):
        record = logging.LogRecord("x", logging.WARNING, __file__, 1, "plain %s", ("text",), None)
        payload = json.loads(JsonFormatter().format(record))
        self.assertEqual(payload["message"], "plain text")
        self.assertEqual(payload["event_type"], "generic")
        self.assertEqual(payload["data"], {})


if __name__ == '__main__':
    unittest.main()
