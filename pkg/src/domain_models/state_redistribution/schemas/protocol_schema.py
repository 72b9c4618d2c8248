# src/domain_models/state_redistribution/schemas/protocol_schema.py

from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

from shared_libs.quantum.states import QuantumState


# --- 1. Protocol Input ---
class ProtocolConfig(BaseModel):
    """
    Parameters of one simulated redistribution run.

    With `derive_sizes` the copy count n and block size b are derived from the
    state (n = ceil(2^k / eps1^2), b = ceil(eps2^2 * 2^D_H)); otherwise they are taken
    as given and the run only reports trends.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    sigma_C: Optional[QuantumState] = Field(None, description="Reference state on C (defaults to the marginal of the input).")
    n: Optional[PositiveInt] = Field(4, description="Number of copies of the purified reference state.")
    b: Optional[PositiveInt] = Field(1, description="Block size of the index split.")
    eps1: float = Field(0.1, gt=0.0, lt=1.0, description="Convex-split smoothing parameter.")
    eps2: float = Field(0.1, gt=0.0, lt=1.0, description="Position-based decoding error parameter.")
    seed: int = Field(0, description="Recorded in the transcript for reproducibility.")
    derive_sizes: bool = Field(False, description="Derive n and b from k and D_H instead of taking them as given.")
    store_step_states: bool = Field(False, description="Keep a copy of the global vector after every step.")

    @model_validator(mode="after")
    def _check_block_size(self):
        if self.derive_sizes:
            if 3 * self.eps1 + 6 * self.eps2 > 1.0:
                raise ValueError(f"3*eps1 + 6*eps2 = {3 * self.eps1 + 6 * self.eps2:.6g} exceeds 1; no guarantee to report.")
            return self
        if self.n is None or self.b is None:
            raise ValueError("n and b are required unless derive_sizes is set.")
        if self.n // self.b < 1:
            raise ValueError(f"Block size b={self.b} exceeds n={self.n} (floor(n/b) must be >= 1).")
        return self


# --- 2. Step Bookkeeping ---
class StepRecord(BaseModel):
    """Post-step diagnostics of one isometry applied to the global vector."""
    name: str = Field(..., description="Step name, e.g. 'alice_uhlmann'.")
    registers: List[str] = Field(..., description="Register labels after the step.")
    global_norm: float = Field(..., description="Norm of the global vector after the step.")
    norm_residual: float = Field(..., description="|norm - 1| after the step.")
    isometry_residual: float = Field(0.0, description="max |V^H V - I| of the step operator (on its input support).")
    details: Dict[str, Any] = Field(default_factory=dict)


# --- 3. Transcript ---
class ProtocolTranscript(BaseModel):
    """Outcome of a simulated run together with the quantities its guarantees refer to."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    side: Literal["B", "A"] = Field("B", description="'B' for the forward protocol, 'A' for the reversed one.")
    k: float = Field(..., description="D_max(Phi_RBC || Phi_RB (x) sigma_C) used to size n.")
    dh_value: float = Field(..., description="D_H^{eps2^2}(Phi_BC || Phi_B (x) sigma_C).")
    dh_eps: float = Field(..., description="Type-one error used for D_H (eps2 squared).")
    n: int
    b: int
    j1_dim: int = Field(..., description="Dimension of the transferred index register.")
    qubits_sent: float = Field(..., ge=0.0, description="1/2 log2 floor(n/b).")
    measured_P: float = Field(..., ge=0.0, le=1.0, description="Purified distance of the final RABC1 state to the input.")
    guaranteed_P: Optional[float] = Field(None, description="3 eps1 + 6 eps2, only when n and b follow the formulas.")
    derived_bound: float = Field(..., description="Bound on measured_P implied by the convex-split and decoding estimates for the actual n, b.")
    guarantee_regime: Literal["derived_sizes", "trend_only"] = "trend_only"
    convex_split_fidelity: float = Field(..., description="Fidelity achieved by the Uhlmann step.")
    decode_success_prob: float = Field(..., description="Probability that the decoder outputs the true block position.")
    no_output_mass: float = Field(..., description="Probability of the inert 'no output' branch.")
    cost_bound: float = Field(..., description="1/2 (k - D_H) + log2(1/(eps1 eps2)).")
    step_records: List[StepRecord] = Field(default_factory=list)
    step_states: Optional[Dict[str, Any]] = Field(None, exclude=True, description="Global vectors after each step (in memory only).")
    notes: Dict[str, Any] = Field(default_factory=dict)
    seed: int = 0

    @property
    def max_norm_residual(self) -> float:
        return max((r.norm_residual for r in self.step_records), default=0.0)

    @property
    def max_isometry_residual(self) -> float:
        return max((r.isometry_residual for r in self.step_records), default=0.0)


# --- 4. Decoder Operators ---
class PositionOperators(BaseModel):
    """Per-position tests Pi_j = Pi_BC on (B, C_j), identities elsewhere."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    pi_single: np.ndarray = Field(..., description="Pi_BC on B (x) C.")
    pi_list: List[np.ndarray] = Field(..., description="Pi_j on B (x) C_1 ... C_b, j = 1..b.")
    pi_sum: np.ndarray = Field(..., description="Sum of the Pi_j.")
    pi_support: np.ndarray = Field(..., description="Projector onto the support of pi_sum.")
    d_b: int
    d_c: int

    @property
    def b(self) -> int:
        return len(self.pi_list)


class DecodingAnalysis(BaseModel):
    """Fidelity of the coherent decoder on the ideal mixture and its analytic estimates."""
    b: int
    fidelity: float = Field(..., description="|<mu''_f| V_B |mu''>|.")
    srm_success: float = Field(..., description="(1/b) sum_j Tr(P_j^2 rho^j): success probability of the square-root measurement.")
    decoding_error: float = Field(..., description="1 - fidelity.")
    hn_exact: float = Field(..., description="2 Tr((I - Pi_1) rho^1) + 4 sum_{j != 1} Tr(Pi_j rho^1).")
    hn_stated: float = Field(..., description="2 eps2^2 + 4 b 2^-D_H.")
    fidelity_bound_holds: bool
    error_bound_holds: bool


class CostTrendPoint(BaseModel):
    n: int
    k: float
    dh_value: float
    per_copy_cost: float = Field(..., description="1/2 (k_n - D_H,n) / n.")
    reference: float = Field(..., description="1/2 I(R:C|B).")
