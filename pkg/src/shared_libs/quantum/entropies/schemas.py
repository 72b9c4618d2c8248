# src/shared_libs/quantum/entropies/schemas.py

import math
from typing import Any, Dict, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class SolverReport(BaseModel):
    """What the solver did to produce a value."""
    iterations: int = Field(0, ge=0)
    final_gap: float = Field(0.0, description="Solver-specific gap (duality gap, bracket width, ...).")
    converged: bool = True
    method: str = Field("closed_form")
    notes: Dict[str, Any] = Field(default_factory=dict)


class EntropyResult(BaseModel):
    """
    A one-shot entropic quantity in bits plus the object that certifies it.

    Infinite values are a distinguished state (`infinite=True`, `value=None`),
    never a float sentinel.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True)

    value: Optional[float] = None
    infinite: bool = False
    certificate: Optional[np.ndarray] = None
    certificate_kind: Optional[Literal["test", "marginal", "state", "purification", "eigenprojector"]] = None
    solver_report: SolverReport = Field(default_factory=SolverReport)

    @model_validator(mode="after")
    def _value_or_infinite(self):
        if self.infinite == (self.value is not None):
            raise ValueError("Exactly one of `value` and `infinite` must be set.")
        return self

    @classmethod
    def infinity(cls, reason: str, sign: int = 1) -> "EntropyResult":
        return cls(infinite=True, solver_report=SolverReport(method="support_check", notes={"reason": reason, "sign": sign}))

    @property
    def bits(self) -> float:
        """Value as a float for arithmetic; +/-inf when infinite."""
        if self.infinite:
            return math.inf * self.solver_report.notes.get("sign", 1)
        return float(self.value)

    def summary(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "infinite": self.infinite,
            "certificate_kind": self.certificate_kind,
            "solver": self.solver_report.model_dump(),
        }


class SpreadReport(BaseModel):
    """Entanglement spread of a marginal and, for tripartite inputs, the k1..k4 quantities."""
    h0: float
    h_inf: float
    spread: float = Field(..., ge=-1e-12)
    k1: Optional[float] = None
    k2: Optional[float] = None
    k3: Optional[float] = None
    k4: Optional[float] = None
