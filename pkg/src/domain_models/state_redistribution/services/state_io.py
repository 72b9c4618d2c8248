# src/domain_models/state_redistribution/services/state_io.py

"""
State files and run reports on disk.

State files keep full double precision; reports print every real with 12
significant digits and spell non-finite values as strings.
"""

import json
import logging
import math
from typing import Any, Dict, Optional, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from domain_models.state_redistribution.schemas import STATE_FILE_VERSION, StateFile
from shared_libs.quantum.states import PureVector, QuantumState, RegisterLayout
from shared_libs.utils.exceptions import (
    InputValidationError,
    StateFileDimensionError,
    StateFileInvariantError,
    StateFileSchemaError,
)

logger = logging.getLogger(__name__)

REPORT_DIGITS = 12


# --- 1. State files ---

def _pairs_to_complex(pairs) -> np.ndarray:
    return np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)


def _complex_to_pairs(values: np.ndarray):
    return [[float(v.real), float(v.imag)] for v in np.asarray(values).reshape(-1)]


def parse_state(raw: Dict[str, Any], source: str = "<memory>") -> Union[QuantumState, PureVector]:
    """Validates an already-decoded StateFile payload into a state object."""
    try:
        parsed = StateFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first["loc"]) or "<root>"
        raise StateFileSchemaError(f"{source}: field '{field}': {first['msg']}") from e

    layout = RegisterLayout.of(*[(r.label, r.dim) for r in parsed.registers])
    d = layout.total_dim
    if parsed.matrix is not None:
        if len(parsed.matrix) != d * d:
            raise StateFileDimensionError(
                f"{source}: registers {layout.labels} give dimension {d}, so 'matrix' needs {d * d} entries; "
                f"found {len(parsed.matrix)}.")
        values = _pairs_to_complex(parsed.matrix).reshape(d, d)
        build = lambda: QuantumState(layout=layout, matrix=values)
    else:
        if len(parsed.vector) != d:
            raise StateFileDimensionError(
                f"{source}: registers {layout.labels} give dimension {d}; 'vector' has {len(parsed.vector)} entries.")
        values = _pairs_to_complex(parsed.vector)
        build = lambda: PureVector(layout=layout, amplitudes=values)

    try:
        return build()
    except InputValidationError as e:
        raise StateFileInvariantError(f"{source}: {e}") from e


def load_state(path: str) -> Union[QuantumState, PureVector]:
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as e:
        raise StateFileSchemaError(f"Cannot read state file {path}: {e}") from e
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise StateFileSchemaError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    if not isinstance(raw, dict):
        raise StateFileSchemaError(f"{path}: top level must be an object.")
    state = parse_state(raw, source=path)
    logger.debug(f"Loaded {type(state).__name__} on {state.layout.labels} from {path}.")
    return state


def state_to_dict(state: Union[QuantumState, PureVector], metadata: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "format_version": STATE_FILE_VERSION,
        "registers": [{"label": r.label, "dim": r.dim} for r in state.layout.registers],
        "metadata": metadata or {},
    }
    if isinstance(state, PureVector):
        payload["vector"] = _complex_to_pairs(state.amplitudes)
    else:
        payload["matrix"] = _complex_to_pairs(state.matrix)
    return payload


def save_state(state: Union[QuantumState, PureVector], path: str, metadata: Optional[Dict[str, Any]] = None) -> None:
    with open(path, "w") as f:
        json.dump(state_to_dict(state, metadata), f, sort_keys=True, indent=1)


# --- 2. Reports ---

def _real(x: float) -> Union[float, str]:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(format(x, f".{REPORT_DIGITS}g"))


def to_jsonable(obj: Any) -> Any:
    """Plain JSON data with every real rounded to 12 significant digits."""
    if isinstance(obj, BaseModel):
        return to_jsonable(obj.model_dump(by_alias=True))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return to_jsonable(np.stack([obj.real, obj.imag], axis=-1).tolist())
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _real(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        return [_real(obj.real), _real(obj.imag)]
    if isinstance(obj, (QuantumState, PureVector)):
        return to_jsonable(state_to_dict(obj))
    return obj


def dumps_report(report: Any) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2)


def save_report(report: Any, path: str) -> None:
    with open(path, "w") as f:
        f.write(dumps_report(report))
        f.write("\n")
    logger.info(f"Report written to {path}.")


def load_report(path: str) -> Dict[str, Any]:
    with open(path, "r") as f:
        return json.load(f)
