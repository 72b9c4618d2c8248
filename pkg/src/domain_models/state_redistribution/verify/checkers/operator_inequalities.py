# src/domain_models/state_redistribution/verify/checkers/operator_inequalities.py

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from domain_models.state_redistribution.schemas import CheckReport
from domain_models.state_redistribution.verify.contracts.base_checker import BaseChecker
from domain_models.state_redistribution.verify.generators import (
    random_contraction,
    random_density,
    random_psd,
)
from shared_libs.quantum import linalg
from shared_libs.quantum.entropies import fidelity
from shared_libs.quantum.linalg import MatrixFunction
from shared_libs.utils.exceptions import ContractViolationError, ParameterError

OPERATOR_TOLERANCE = 1e-10
PROBABILITY_TOLERANCE = 1e-10


def _require_contraction(m: np.ndarray, name: str) -> np.ndarray:
    m = linalg.require_hermitian(m, name)
    values = linalg.eigvalsh(m)
    if values[0] < -OPERATOR_TOLERANCE or values[-1] > 1.0 + OPERATOR_TOLERANCE:
        raise ContractViolationError(f"{name} must satisfy 0 <= {name} <= I; spectrum [{values[0]:.3e}, {values[-1]:.6f}].")
    return m


def _require_psd(m: np.ndarray, name: str) -> np.ndarray:
    m = linalg.require_hermitian(m, name)
    if not linalg.is_psd(m):
        raise ContractViolationError(f"{name} must be positive semidefinite.")
    return m


# --- 1. Hayashi-Nagaoka ---
class HayashiNagaokaChecker(BaseChecker):
    """I - (S+T)^{-1/2} S (S+T)^{-1/2} <= 2(I - S) + 4T for 0 <= S <= I, T >= 0."""
    name = "hayashi-nagaoka"

    def evaluate(self, S: np.ndarray, T: np.ndarray, slack: Optional[float] = None) -> CheckReport:
        s = _require_contraction(S, "S")
        t = _require_psd(T, "T")
        if s.shape != t.shape:
            raise ContractViolationError(f"S and T differ in shape: {s.shape} vs {t.shape}.")
        eye = np.eye(s.shape[0])
        inv_sqrt = linalg.matrix_function(linalg.hermitize(s + t), MatrixFunction.INV_SQRT_ON_SUPPORT)
        left = eye - inv_sqrt @ s @ inv_sqrt
        right = 2.0 * (eye - s) + 4.0 * t
        comparison = linalg.operator_leq(linalg.hermitize(left), linalg.hermitize(right), self._slack(slack))
        return CheckReport.operator(self.name, comparison.witness, self._slack(slack), details={"dim": s.shape[0]})

    def generate_inputs(self, rng: np.random.Generator, dim: int) -> Dict[str, Any]:
        return {"S": random_contraction(rng, dim), "T": random_psd(rng, dim, scale=rng.uniform(0.0, 2.0))}


# --- 2. Gentle measurement ---
class GentleMeasurementChecker(BaseChecker):
    """F(rho, A rho A / Tr(A^2 rho)) >= sqrt(Tr(A^2 rho)) for 0 <= A <= I."""
    name = "gentle"

    def evaluate(self, rho: np.ndarray, A: np.ndarray, slack: Optional[float] = None) -> CheckReport:
        rho = _require_psd(linalg.as_matrix(rho), "rho")
        a = _require_contraction(A, "A")
        weight = float(np.real(np.trace(a @ a @ rho)))
        if weight <= 1e-14:
            raise ParameterError("Tr(A^2 rho) vanishes: the post-measurement state is undefined.")
        post = linalg.hermitize(a @ rho @ a / weight)
        f = fidelity(rho, post)
        return CheckReport.scalar(self.name, np.sqrt(weight), f, self._slack(slack),
                                  details={"success_probability": weight, "fidelity": f})

    def generate_inputs(self, rng: np.random.Generator, dim: int) -> Dict[str, Any]:
        return {"rho": random_density(rng, dim), "A": random_contraction(rng, dim, floor=0.05)}


# --- 3. Pretty-good measurement ---
class PrettyGoodMeasurementChecker(BaseChecker):
    """
    sum_k p_k^2 Tr(rho^{-1/2} rho_k rho^{-1/2} rho_k) >= 1 - sum_{k != k'} sqrt(p_k p_k') F(rho_k, rho_k').
    """
    name = "pgm"

    def evaluate(self, ensemble: Sequence[Tuple[float, np.ndarray]], slack: Optional[float] = None) -> CheckReport:
        if not ensemble:
            raise ParameterError("Ensemble is empty.")
        probs = np.array([float(p) for p, _ in ensemble])
        states: List[np.ndarray] = [_require_psd(linalg.as_matrix(r), f"rho_{k}") for k, (_, r) in enumerate(ensemble)]
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > PROBABILITY_TOLERANCE:
            raise ParameterError(f"Ensemble probabilities must be non-negative and sum to 1, got sum {probs.sum():.12g}.")
        for k, r in enumerate(states):
            if abs(np.real(np.trace(r)) - 1.0) > PROBABILITY_TOLERANCE:
                raise ContractViolationError(f"Ensemble state {k} does not have unit trace.")

        average = linalg.hermitize(sum(p * r for p, r in zip(probs, states)))
        inv_sqrt = linalg.matrix_function(average, MatrixFunction.INV_SQRT_ON_SUPPORT)
        success = 0.0
        for p, r in zip(probs, states):
            success += p ** 2 * float(np.real(np.trace(inv_sqrt @ r @ inv_sqrt @ r)))
        overlap = 0.0
        for k in range(len(states)):
            for j in range(len(states)):
                if j != k:
                    overlap += np.sqrt(probs[k] * probs[j]) * fidelity(states[k], states[j])
        return CheckReport.scalar(self.name, 1.0 - overlap, success, self._slack(slack),
                                  details={"ensemble_size": len(states)})

    def generate_inputs(self, rng: np.random.Generator, dim: int) -> Dict[str, Any]:
        probs = rng.dirichlet(np.ones(3))
        return {"ensemble": [(float(p), random_density(rng, dim)) for p in probs]}


# --- Functional entry points ---

def check_hayashi_nagaoka(S: np.ndarray, T: np.ndarray, slack: float = 1e-9) -> CheckReport:
    return HayashiNagaokaChecker(slack).evaluate(S=S, T=T)


def check_gentle(rho: np.ndarray, A: np.ndarray, slack: float = 1e-9) -> CheckReport:
    return GentleMeasurementChecker(slack).evaluate(rho=rho, A=A)


def check_pgm(ensemble: Sequence[Tuple[float, np.ndarray]], slack: float = 1e-9) -> CheckReport:
    return PrettyGoodMeasurementChecker(slack).evaluate(ensemble=ensemble)
