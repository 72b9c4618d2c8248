# src/domain_models/state_redistribution/schemas/io_schema.py

from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, PositiveInt, model_validator

STATE_FILE_VERSION = 1


class RegisterEntry(BaseModel):
    label: str = Field(..., min_length=1)
    dim: PositiveInt


class StateFile(BaseModel):
    """
    On-disk state. Exactly one of `matrix` (row-major density operator) or
    `vector` (pure state) is present; entries are [re, im] pairs.
    """
    format_version: int = Field(STATE_FILE_VERSION, description="Schema version of the file.")
    registers: List[RegisterEntry] = Field(..., min_length=1)
    matrix: Optional[List[Tuple[float, float]]] = None
    vector: Optional[List[Tuple[float, float]]] = None
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _exactly_one_payload(self):
        if (self.matrix is None) == (self.vector is None):
            raise ValueError("Exactly one of 'matrix' or 'vector' must be present.")
        if self.format_version != STATE_FILE_VERSION:
            raise ValueError(f"Unsupported format_version {self.format_version}.")
        return self


class RunReport(BaseModel):
    """Everything one cli invocation produced."""
    command: List[str] = Field(..., description="argv echo.")
    config: Dict[str, Any] = Field(default_factory=dict, description="Resolved settings and arguments.")
    results: Any = Field(None, description="Entropy results, transcripts or check reports.")
    exit_code: int = 0
    wall_time: float = Field(0.0, description="Seconds; the only non-deterministic field.")
    tool_version: str
    seed: Optional[int] = None
