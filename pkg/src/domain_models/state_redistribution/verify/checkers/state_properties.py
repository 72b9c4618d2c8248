# src/domain_models/state_redistribution/verify/checkers/state_properties.py

import math
from typing import Any, Dict, Optional

import numpy as np

from domain_models.state_redistribution.protocol.convex_split import convex_split_fidelity
from domain_models.state_redistribution.schemas import CheckReport
from domain_models.state_redistribution.verify.contracts.base_checker import BaseChecker
from domain_models.state_redistribution.verify.generators import random_density, random_mixed_state
from shared_libs.quantum import linalg
from shared_libs.quantum.entropies import fidelity, purified_distance, smooth_split_dmax
from shared_libs.quantum.states import QuantumState
from shared_libs.utils.exceptions import ParameterError

SPLIT_COPIES = (1, 2, 4, 6)


# --- 1. Convex split ---
class ConvexSplitChecker(BaseChecker):
    """
    Unsmoothed: F^2(tau, tau_P (x) sigma^n) >= 1 - 2^k / n.
    Smoothed:   P(tau, tau_P (x) sigma^n) <= sqrt(2^k' / n) + 2 eps with k' the smoothed split quantity.
    """
    name = "convex-split"

    def evaluate(self, rho_pq: QuantumState, sigma_q: Optional[np.ndarray] = None, n: int = 2,
                 p: str = "P", q: str = "Q", smoothed_eps: Optional[float] = None,
                 slack: Optional[float] = None) -> CheckReport:
        if sigma_q is None:
            sigma_q = rho_pq.marginal([q]).matrix
        sigma_q = linalg.as_matrix(sigma_q)
        stats = convex_split_fidelity(rho_pq, [p], [q], sigma_q, n)
        details: Dict[str, Any] = {"n": n, **stats}

        if smoothed_eps is None:
            return CheckReport.scalar(self.name, stats["estimate"], stats["fidelity_squared"],
                                      self._slack(slack), details=details)

        if not 0.0 < smoothed_eps < 1.0:
            raise ParameterError(f"smoothed_eps must lie in (0, 1), got {smoothed_eps}.")
        k_smooth = smooth_split_dmax(rho_pq, [p], [q], sigma_q, smoothed_eps).bits
        distance = math.sqrt(max(0.0, 1.0 - stats["fidelity_squared"]))
        bound = math.sqrt(2.0 ** k_smooth / n) + 2.0 * smoothed_eps
        details.update({"smoothed_eps": smoothed_eps, "k_smooth": k_smooth, "purified_distance": distance})
        return CheckReport.scalar(self.name, distance ** 2, min(1.0, bound) ** 2, self._slack(slack), details=details)

    def generate_inputs(self, rng: np.random.Generator, dim: int) -> Dict[str, Any]:
        return {"rho_pq": random_mixed_state(rng, [("P", 2), ("Q", 2)]),
                "n": int(rng.choice(SPLIT_COPIES))}


# --- 2. Monotonicity of fidelity under partial trace ---
class FidelityMonotonicityChecker(BaseChecker):
    name = "monotonicity"

    def evaluate(self, rho: QuantumState, sigma: QuantumState, keep: str = "A",
                 slack: Optional[float] = None) -> CheckReport:
        joint = fidelity(rho, sigma)
        reduced = fidelity(rho.marginal([keep]), sigma.marginal([keep]))
        return CheckReport.scalar(self.name, joint, reduced, self._slack(slack),
                                  details={"joint": joint, "reduced": reduced})

    def generate_inputs(self, rng: np.random.Generator, dim: int) -> Dict[str, Any]:
        d_a = min(max(dim, 2), 4)
        registers = [("A", d_a), ("B", 2)]
        return {"rho": random_mixed_state(rng, registers), "sigma": random_mixed_state(rng, registers)}


# --- 3. Triangle inequality of the purified distance ---
class PurifiedTriangleChecker(BaseChecker):
    name = "triangle"

    def evaluate(self, rho: np.ndarray, sigma: np.ndarray, tau: np.ndarray,
                 slack: Optional[float] = None) -> CheckReport:
        direct = purified_distance(rho, tau)
        via = purified_distance(rho, sigma) + purified_distance(sigma, tau)
        return CheckReport.scalar(self.name, direct, via, self._slack(slack), details={"direct": direct, "via": via})

    def generate_inputs(self, rng: np.random.Generator, dim: int) -> Dict[str, Any]:
        return {"rho": random_density(rng, dim), "sigma": random_density(rng, dim), "tau": random_density(rng, dim)}


# --- Functional entry points ---

def check_convex_split(rho_pq: QuantumState, sigma_q: Optional[np.ndarray], n: int, slack: float = 1e-8,
                       smoothed_eps: Optional[float] = None, p: str = "P", q: str = "Q") -> CheckReport:
    return ConvexSplitChecker(slack).evaluate(rho_pq=rho_pq, sigma_q=sigma_q, n=n, p=p, q=q,
                                              smoothed_eps=smoothed_eps)


def check_fidelity_monotonicity(rho: QuantumState, sigma: QuantumState, keep: str = "A",
                                slack: float = 1e-9) -> CheckReport:
    return FidelityMonotonicityChecker(slack).evaluate(rho=rho, sigma=sigma, keep=keep)


def check_purified_triangle(rho: np.ndarray, sigma: np.ndarray, tau: np.ndarray, slack: float = 1e-9) -> CheckReport:
    return PurifiedTriangleChecker(slack).evaluate(rho=rho, sigma=sigma, tau=tau)
