# shared_libs/configs/schemas/lab_config.py

from pydantic import BaseModel, Field, PositiveInt, PositiveFloat
from typing import Dict, Literal

# --- 1. NUMERICAL CORE ---

class LinalgConfig(BaseModel):
    """Tolerances and limits shared by every dense linear-algebra primitive."""
    max_dim: PositiveInt = Field(65536, description="Largest matrix dimension tensor() may produce.")
    support_cutoff: PositiveFloat = Field(1e-10, description="Relative cutoff (x lambda_max) separating support from kernel.")
    psd_clip: PositiveFloat = Field(1e-10, description="Eigenvalues above -psd_clip are clipped to 0 by matrix_function.")
    hermitian_tol: PositiveFloat = Field(1e-12, description="Entrywise tolerance of the Hermitian contract.")
    eig_backend: Literal["lapack", "jacobi"] = Field("lapack", description="Hermitian eigensolver backend.")
    jacobi_max_sweeps: PositiveInt = Field(100, description="Sweep cap of the cyclic Jacobi solver.")


class SolverConfig(BaseModel):
    """Iterative solvers of the entropies module."""
    max_newton_iterations: PositiveInt = Field(500, description="Total Newton steps of the log-det barrier method.")
    gap_tolerance: PositiveFloat = Field(1e-7, description="Relative duality gap at which the barrier method stops.")
    barrier_mu: float = Field(10.0, gt=1.0, description="Barrier parameter growth factor per outer iteration.")
    bisection_iterations: PositiveInt = Field(200, description="Cap of the Neyman-Pearson threshold bisection.")
    smoothing_budget: PositiveInt = Field(24, description="Default number of mixing weights tried by ansatz smoothing.")


# --- 2. PROTOCOL & VERIFICATION ---

class ProtocolDefaults(BaseModel):
    """Defaults used when the cli does not receive explicit protocol parameters."""
    dim_cap: PositiveInt = Field(65536, description="Cap on d_R d_A d_B d_C (d_L d_C)^n.")
    default_eps1: float = Field(0.1, gt=0.0, lt=1.0)
    default_eps2: float = Field(0.1, gt=0.0, lt=1.0)
    isometry_tolerance: PositiveFloat = Field(1e-8, description="Allowed |V^dag V - I| for constructed isometries.")


class VerifyConfig(BaseModel):
    """Batch checker settings."""
    default_slack: PositiveFloat = Field(1e-9)
    max_workers: PositiveInt = Field(4, description="Thread pool size of the suite orchestrator.")
    sweep_max_dim: PositiveInt = Field(512, description="Largest n-fold dimension evaluated by asymptotic sweeps and cost trends.")
    suite_slack: Dict[str, PositiveFloat] = Field(
        default_factory=lambda: {
            "hayashi-nagaoka": 1e-9,
            "gentle": 1e-9,
            "pgm": 1e-9,
            "dh-chain": 1e-8,
            "comparison": 1e-6,
            "spread": 1e-9,
            "convex-split": 1e-8,
            "monotonicity": 1e-9,
            "triangle": 1e-9,
        },
        description="Per-suite slack overriding default_slack.",
    )


class LabSettings(BaseModel):
    """Root schema of configs/lab/lab_config.yaml (key LAB_CONFIG)."""
    linalg: LinalgConfig = Field(default_factory=LinalgConfig)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    protocol: ProtocolDefaults = Field(default_factory=ProtocolDefaults)
    verify: VerifyConfig = Field(default_factory=VerifyConfig)
