# src/domain_models/state_redistribution/verify/checkers/entropy_chains.py

import logging
import math
from typing import Any, Dict, Optional, Sequence

import numpy as np

from domain_models.state_redistribution.schemas import CheckReport
from domain_models.state_redistribution.verify.contracts.base_checker import BaseChecker
from domain_models.state_redistribution.verify.generators import random_density, random_pure
from shared_libs.quantum import linalg
from shared_libs.quantum.entropies import d_half, dh_eps, dmax, fidelity, hmax_cond, hmin_cond, spread_ks
from shared_libs.quantum.linalg import MatrixFunction
from shared_libs.quantum.states import PureVector, maximally_mixed
from shared_libs.utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

CHAIN_EPSILONS = (0.1, 0.3, 0.5)
CONSTRUCTION_TOLERANCE = 1e-8
MIXING_BISECTIONS = 100
FIDELITY_FLOOR = 1e-12


def _excess(a: float, b: float) -> float:
    """a - b with inf - inf read as 0 (both sides infinite means the step holds)."""
    if math.isinf(a) and math.isinf(b) and (a > 0) == (b > 0):
        return 0.0
    return a - b


# --- 1. D_H^0 <= D_1/2 <= D_H^eps + log2(4/eps) ---

def _type_one_and_two(rho1: np.ndarray, rho2: np.ndarray, p: float):
    """Tr(L rho1), Tr(L rho2) for L = p rho^{-1/2} rho1 rho^{-1/2}, rho = p rho1 + (1 - p) rho2."""
    mixture = linalg.hermitize(p * rho1 + (1.0 - p) * rho2)
    inv_sqrt = linalg.matrix_function(mixture, MatrixFunction.INV_SQRT_ON_SUPPORT)
    test = linalg.hermitize(p * inv_sqrt @ rho1 @ inv_sqrt)
    return float(np.real(np.trace(test @ rho1))), float(np.real(np.trace(test @ rho2)))


def fidelity_test_construction(rho1: np.ndarray, rho2: np.ndarray, eps: float) -> Dict[str, Any]:
    """
    Measurement behind the upper half of the chain.

    The mixing weight is capped at p0 = 1 / (1 + eps^2 / (4 F^2)), where the pretty-good
    test already reaches Tr(L rho1) >= 1 - eps. Tr(L rho1) grows with p, so bisection on
    [0, p0] lands on Tr(L rho1) = 1 - eps exactly while Tr(L rho2) stays below 4 F^2 / eps.
    """
    f = fidelity(rho1, rho2)
    p_cap = 1.0 / (1.0 + eps ** 2 / (4.0 * f ** 2))
    target = 1.0 - eps
    success_cap, error_cap = _type_one_and_two(rho1, rho2, p_cap)
    if success_cap <= target:
        return {"p": p_cap, "p_cap": p_cap, "type_one": success_cap, "type_two": error_cap,
                "fidelity": f, "exact": abs(success_cap - target) <= CONSTRUCTION_TOLERANCE}

    lo, hi = 0.0, p_cap
    success, error = success_cap, error_cap
    for _ in range(MIXING_BISECTIONS):
        mid = 0.5 * (lo + hi)
        s_mid, e_mid = _type_one_and_two(rho1, rho2, mid)
        if s_mid < target:
            lo = mid
        else:
            hi, success, error = mid, s_mid, e_mid
    # Tr(L rho1) can jump at p = 0+ when supp(rho1) leaves supp(rho2).
    exact = abs(success - target) <= CONSTRUCTION_TOLERANCE
    return {"p": hi, "p_cap": p_cap, "type_one": success, "type_two": error, "fidelity": f, "exact": exact}


class DHChainChecker(BaseChecker):
    name = "dh-chain"

    def evaluate(self, rho1: np.ndarray, rho2: np.ndarray, eps: float, slack: Optional[float] = None) -> CheckReport:
        eps = float(eps)
        if not 0.0 < eps < 1.0:
            raise ParameterError(f"eps must lie in (0, 1), got {eps}.")
        rho1, rho2 = linalg.as_matrix(rho1), linalg.as_matrix(rho2)
        d0 = dh_eps(rho1, rho2, 0.0).bits
        dh = dh_eps(rho1, rho2, eps).bits
        dhalf = d_half(rho1, rho2).bits
        upper = dh + math.log2(4.0 / eps)

        steps = {
            "lower": _excess(d0, dhalf),
            "upper": _excess(dhalf, upper),
        }
        details: Dict[str, Any] = {"eps": eps, "dh_zero": d0, "d_half": dhalf, "dh_eps": dh,
                                   "upper_bound": upper}

        f = fidelity(rho1, rho2)
        if f > FIDELITY_FLOOR:
            construction = fidelity_test_construction(rho1, rho2, eps)
            if construction["exact"]:
                steps["type_one"] = max(0.0, abs(construction["type_one"] - (1.0 - eps)) - CONSTRUCTION_TOLERANCE)
            else:
                steps["type_one"] = (1.0 - eps) - construction["type_one"]
            steps["type_two"] = construction["type_two"] - 4.0 * f ** 2 / eps
            details["construction"] = construction
        else:
            details["construction"] = {"skipped": "orthogonal supports"}

        details["violations"] = steps
        worst = max(steps.values())
        return CheckReport.scalar(self.name, worst, 0.0, self._slack(slack), details=details)

    def generate_inputs(self, rng: np.random.Generator, dim: int) -> Dict[str, Any]:
        return {"rho1": random_density(rng, dim), "rho2": random_density(rng, dim),
                "eps": float(rng.choice(CHAIN_EPSILONS))}


# --- 2. Computable steps of the converse comparison ---

class ComparisonChainChecker(BaseChecker):
    """
    (i)  D_max(phi_RBC || phi_RB (x) I/d_C) >= -H_min(C|RB) + log2 d_C
    (ii) -D_1/2(phi_BC || phi_B (x) I/d_C) <= H_max(C|B) - log2 d_C
    """
    name = "comparison"

    def evaluate(self, phi: PureVector, roles: Sequence[str] = ("R", "A", "B", "C"),
                 slack: Optional[float] = None) -> CheckReport:
        r, _, b, c = roles
        d_c = phi.layout.dim_of(c)
        log_dc = math.log2(d_c)
        mixed_c = maximally_mixed(phi.layout.select([c]))

        rbc = phi.marginal([r, b, c])
        reference_rb = phi.marginal([r, b]).tensor(mixed_c)
        first_lhs = dmax(rbc, reference_rb).bits
        first_rhs = -hmin_cond(phi, [c], [r, b]).bits + log_dc

        bc = phi.marginal([b, c])
        reference_b = phi.marginal([b]).tensor(mixed_c)
        second_lhs = -d_half(bc, reference_b).bits
        second_rhs = hmax_cond(phi, [c], [b]).bits - log_dc

        steps = {"dmax_vs_hmin": _excess(first_rhs, first_lhs), "dhalf_vs_hmax": _excess(second_lhs, second_rhs)}
        details = {
            "dmax": first_lhs, "hmin_bound": first_rhs,
            "neg_d_half": second_lhs, "hmax_bound": second_rhs,
            "violations": steps,
        }
        return CheckReport.scalar(self.name, max(steps.values()), 0.0, self._slack(slack), details=details)

    def generate_inputs(self, rng: np.random.Generator, dim: int) -> Dict[str, Any]:
        d_c = min(max(dim, 2), 3)
        return {"phi": random_pure(rng, [("R", 2), ("A", 2), ("B", 2), ("C", d_c)])}


# --- 3. Spread inequality k2 + k3 - k4 <= k1 ---

class SpreadInequalityChecker(BaseChecker):
    name = "spread"

    def evaluate(self, phi: PureVector, r: str = "R", c: str = "C", slack: Optional[float] = None) -> CheckReport:
        report = spread_ks(phi, [r], [c])
        lhs = report.k2 + report.k3 - report.k4
        return CheckReport.scalar(self.name, lhs, report.k1, self._slack(slack), details=report.model_dump())

    def generate_inputs(self, rng: np.random.Generator, dim: int) -> Dict[str, Any]:
        d = min(max(dim, 2), 4)
        return {"phi": random_pure(rng, [("R", d), ("A", 2), ("C", d)])}


# --- Functional entry points ---

def check_dh_chain(rho1: np.ndarray, rho2: np.ndarray, eps: float, slack: float = 1e-8) -> CheckReport:
    return DHChainChecker(slack).evaluate(rho1=rho1, rho2=rho2, eps=eps)


def check_comparison_chain(phi: PureVector, slack: float = 1e-6,
                           roles: Sequence[str] = ("R", "A", "B", "C")) -> CheckReport:
    return ComparisonChainChecker(slack).evaluate(phi=phi, roles=roles)


def check_spread_inequality(phi: PureVector, slack: float = 1e-9) -> CheckReport:
    return SpreadInequalityChecker(slack).evaluate(phi=phi)
