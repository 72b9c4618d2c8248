import json
import math
import os
import shutil
import tempfile
import unittest

import numpy as np

from domain_models.state_redistribution.services import (
    load_report,
    load_state,
    parse_state,
    save_report,
    save_state,
    to_jsonable,
)
from shared_libs.quantum.states import PureVector, QuantumState, RegisterLayout, bell_pair, random_state
from shared_libs.utils.exceptions import (
    StateFileDimensionError,
    StateFileInvariantError,
    StateFileSchemaError,
)


def _pairs(values):
    return [[float(np.real(v)), float(np.imag(v))] for v in np.asarray(values).reshape(-1)]


class TestStateFiles(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def _path(self, name: str) -> str:
        return os.path.join(self.tmp, name)

    def test_mixed_state_round_trip(self):
        state = random_state(RegisterLayout.of(("A", 2), ("B", 3)), "mixed_ginibre", seed=2)
        save_state(state, self._path("rho.json"))
        loaded = load_state(self._path("rho.json"))
        self.assertIsInstance(loaded, QuantumState)
        self.assertEqual(loaded.layout.labels, ["A", "B"])
        np.testing.assert_allclose(loaded.matrix, state.matrix, atol=1e-12)

    def test_pure_state_round_trip(self):
        save_state(bell_pair(), self._path("phi.json"), metadata={"origin": "test"})
        loaded = load_state(self._path("phi.json"))
        self.assertIsInstance(loaded, PureVector)
        np.testing.assert_allclose(loaded.amplitudes, bell_pair().amplitudes, atol=1e-15)

    def test_trace_violation(self):
        raw = {"registers": [{"label": "A", "dim": 2}], "matrix": _pairs(np.diag([0.6, 0.3]))}
        with self.assertRaises(StateFileInvariantError) as ctx:
            parse_state(raw)
        self.assertIn("trace", str(ctx.exception))

    def test_dimension_mismatch(self):
        raw = {"registers": [{"label": "A", "dim": 3}], "vector": _pairs([1.0, 0.0])}
        with self.assertRaises(StateFileDimensionError):
            parse_state(raw)

    def test_both_payloads_rejected(self):
        raw = {"registers": [{"label": "A", "dim": 1}], "vector": [[1.0, 0.0]], "matrix": [[1.0, 0.0]]}
        with self.assertRaises(StateFileSchemaError):
            parse_state(raw)

    def test_missing_registers_names_field(self):
        with self.assertRaises(StateFileSchemaError) as ctx:
            parse_state({"vector": [[1.0, 0.0]]})
        self.assertIn("registers", str(ctx.exception))

    def test_malformed_json(self):
        with open(self._path("bad.json"), "w") as f:
            f.write('{"registers": [\n')
        with self.assertRaises(StateFileSchemaError) as ctx:
            load_state(self._path("bad.json"))
        self.assertIn("line", str(ctx.exception))

    def test_missing_file(self):
        with self.assertRaises(StateFileSchemaError):
            load_state(self._path("absent.json"))


class TestReports(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_reals_use_twelve_digits(self):
        self.assertEqual(to_jsonable(math.pi), 3.14159265359)
        self.assertEqual(to_jsonable([math.inf, -math.inf]), ["inf", "-inf"])
        self.assertEqual(to_jsonable(1 + 2j), [1.0, 2.0])

    def test_report_survives_disk(self):
        report = {"value": 1 / 3, "nested": {"array": np.array([0.1, 0.2])}, "flag": np.bool_(True)}
        path = os.path.join(self.tmp, "report.json")
        save_report(report, path)
        self.assertEqual(load_report(path), to_jsonable(report))
        with open(path) as f:
            self.assertEqual(json.load(f)["value"], 0.333333333333)


if __name__ == '__main__':
    unittest.main()
