# src/domain_models/state_redistribution/schemas/check_schema.py

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


# --- 1. Single Check ---
class CheckReport(BaseModel):
    """
    Machine-readable outcome of one inequality check.

    Scalar checks pass iff lhs <= rhs + slack. Operator checks store the minimum
    eigenvalue witness w as lhs = -w, rhs = 0, so the same rule reads w >= -slack.
    """
    model_config = ConfigDict(populate_by_name=True)

    check_name: str = Field(..., description="Registered checker name, e.g. 'hayashi-nagaoka'.")
    inputs_digest: Dict[str, Any] = Field(default_factory=dict, description="Reproduction data: seed and dims.")
    lhs: float
    rhs: float
    slack: float = Field(..., ge=0.0)
    passed: bool = Field(..., alias="pass")
    kind: Literal["scalar", "operator"] = "scalar"
    details: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _pass_matches_sides(self):
        if self.passed != (self.lhs <= self.rhs + self.slack):
            raise ValueError(f"pass={self.passed} inconsistent with lhs={self.lhs} rhs={self.rhs} slack={self.slack}.")
        return self

    @classmethod
    def scalar(cls, name: str, lhs: float, rhs: float, slack: float,
               details: Optional[Dict[str, Any]] = None, digest: Optional[Dict[str, Any]] = None) -> "CheckReport":
        lhs, rhs = float(lhs), float(rhs)
        return cls(check_name=name, inputs_digest=digest or {}, lhs=lhs, rhs=rhs, slack=slack,
                   passed=lhs <= rhs + slack, kind="scalar", details=details or {})

    @classmethod
    def operator(cls, name: str, witness: float, slack: float,
                 details: Optional[Dict[str, Any]] = None, digest: Optional[Dict[str, Any]] = None) -> "CheckReport":
        witness = float(witness)
        details = dict(details or {})
        details["witness"] = witness
        return cls(check_name=name, inputs_digest=digest or {}, lhs=-witness, rhs=0.0, slack=slack,
                   passed=-witness <= slack, kind="operator", details=details)

    @property
    def violation(self) -> float:
        return self.lhs - self.rhs

    def with_digest(self, digest: Dict[str, Any]) -> "CheckReport":
        return self.model_copy(update={"inputs_digest": digest})


# --- 2. Batch ---
class SuiteReport(BaseModel):
    """All-or-nothing outcome of a seeded batch of trials."""
    suite: str
    trials: int
    seed: int
    dims: List[int]
    passed: bool = Field(..., alias="pass")
    failures: List[CheckReport] = Field(default_factory=list, description="Failing trials with reproduction data.")
    errors: List[Dict[str, Any]] = Field(default_factory=list, description="Trials that raised instead of reporting.")
    max_violation: float = Field(..., description="Largest lhs - rhs over all trials.")

    model_config = ConfigDict(populate_by_name=True)


# --- 3. Asymptotic sweep ---
class SweepPoint(BaseModel):
    n: int = Field(..., ge=1)
    value: float = Field(..., description="D_H^eps of the n-fold product.")
    reference: float = Field(..., description="First-order term n D(rho||sigma).")
    gap: float
    envelope: float = Field(..., description="Allowed |gap|: c sqrt(n) + c'.")
    within_envelope: bool
    oracle: Optional[float] = Field(None, description="Classical LP value when the inputs commute.")
    oracle_error: Optional[float] = None


class SweepReport(BaseModel):
    """Trend-level comparison of D_H^eps on n copies against n D(rho||sigma)."""
    eps: float
    n_max: int = Field(..., description="Largest n requested.")
    relative_entropy: float
    variance: float
    c: float
    c_prime: float
    commuting: bool
    truncated: bool = False
    points: List[SweepPoint] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)
    passed: bool = Field(..., alias="pass")

    model_config = ConfigDict(populate_by_name=True)
