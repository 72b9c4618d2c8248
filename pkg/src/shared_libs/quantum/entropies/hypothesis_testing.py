# src/shared_libs/quantum/entropies/hypothesis_testing.py

"""
Hypothesis-testing relative entropy D_H^eps via the quantum Neyman-Pearson structure.

With s = 1/t the optimal tests are P_+(s rho - sigma) plus a fractional weight on
the boundary eigenspace. g(s) = Tr(P_+(s rho - sigma) rho) is the derivative of the
convex map s -> Tr(s rho - sigma)_+, hence nondecreasing, and the threshold s* with
g(s*-) <= 1 - eps <= g(s*+) is found by bisection. The final test is the convex
combination of the two bracketing projectors that meets Tr(Pi rho) = 1 - eps exactly.
"""

import logging
from typing import Tuple

import numpy as np
from scipy.optimize import linprog

from shared_libs.configs.config_loader import get_settings
from shared_libs.quantum import linalg
from shared_libs.quantum.entropies.basic import StateLike, as_operator
from shared_libs.quantum.entropies.schemas import EntropyResult, SolverReport
from shared_libs.utils.exceptions import ConvergenceError, DimensionError, NumericError, ParameterError

logger = logging.getLogger(__name__)

ZERO_OVERLAP = 1e-14
MAX_DOUBLINGS = 1000


def _validate_eps(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps < 1.0:
        raise ParameterError(f"eps must lie in [0, 1), got {eps}.")
    return eps


def _positive_projector(rho: np.ndarray, sigma: np.ndarray, s: float) -> Tuple[np.ndarray, float]:
    p = linalg.positive_part_projector(linalg.hermitize(s * rho - sigma))
    return p, float(np.real(np.trace(p @ rho)))


def _result_from_test(test: np.ndarray, sigma: np.ndarray, report: SolverReport) -> EntropyResult:
    overlap = float(np.real(np.trace(test @ sigma)))
    report.notes["type_two_error"] = overlap
    if overlap <= ZERO_OVERLAP:
        result = EntropyResult.infinity("Tr(Pi sigma) = 0")
        result.certificate, result.certificate_kind = test, "test"
        result.solver_report.notes.update(report.notes)
        return result
    return EntropyResult(value=float(-np.log2(overlap)), certificate=test,
                         certificate_kind="test", solver_report=report)


def dh_eps(rho: StateLike, sigma: StateLike, eps: float) -> EntropyResult:
    """
    D_H^eps(rho||sigma) = -log2 min{Tr(Pi sigma) : 0 <= Pi <= I, Tr(Pi rho) >= 1 - eps}.

    eps = 0 uses the convention Tr(Pi rho) = 1, whose optimum is the support
    projector of rho. The certificate Pi satisfies Tr(Pi rho) = 1 - eps within 1e-10.
    """
    eps = _validate_eps(eps)
    rho, sigma = as_operator(rho), as_operator(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError(f"Operators act on different spaces: {rho.shape} vs {sigma.shape}.")

    if eps == 0.0:
        test = linalg.support_projector(rho)
        return _result_from_test(test, sigma, SolverReport(method="support_projector"))

    target = 1.0 - eps
    s_lo, g_lo = 0.0, 0.0
    p_lo = np.zeros_like(rho)
    s_hi = 1.0
    p_hi, g_hi = _positive_projector(rho, sigma, s_hi)
    doublings = 0
    while g_hi < target:
        s_lo, p_lo, g_lo = s_hi, p_hi, g_hi
        s_hi *= 2.0
        doublings += 1
        if doublings > MAX_DOUBLINGS:
            raise ConvergenceError("Neyman-Pearson threshold search did not bracket 1 - eps.",
                                   iterations=doublings)
        p_hi, g_hi = _positive_projector(rho, sigma, s_hi)

    max_iter = get_settings().solver.bisection_iterations
    iterations = 0
    while iterations < max_iter and (s_hi - s_lo) > 1e-15 * max(1.0, s_hi):
        s_mid = 0.5 * (s_lo + s_hi)
        p_mid, g_mid = _positive_projector(rho, sigma, s_mid)
        if g_mid < target:
            s_lo, p_lo, g_lo = s_mid, p_mid, g_mid
        else:
            s_hi, p_hi, g_hi = s_mid, p_mid, g_mid
        iterations += 1

    if g_hi - g_lo <= 0:
        x = 1.0
    else:
        x = min(1.0, max(0.0, (target - g_lo) / (g_hi - g_lo)))
    test = linalg.hermitize((1.0 - x) * p_lo + x * p_hi)
    attained = float(np.real(np.trace(test @ rho)))
    if abs(attained - target) > 1e-10 and attained < target:
        raise NumericError(f"Test attains Tr(Pi rho) = {attained:.12f} < 1 - eps = {target:.12f}.",
                           witness=attained - target)

    logger.debug(f"D_H threshold s* in [{s_lo:.6e}, {s_hi:.6e}] after {iterations} bisections (x = {x:.6f}).")
    report = SolverReport(
        iterations=iterations + doublings,
        final_gap=s_hi - s_lo,
        method="neyman_pearson_bisection",
        notes={"threshold": 0.5 * (s_lo + s_hi), "boundary_weight": x, "type_one_success": attained},
    )
    return _result_from_test(test, sigma, report)


def classical_dh_lp(p: np.ndarray, q: np.ndarray, eps: float) -> float:
    """
    D_H^eps for commuting (diagonal) inputs as a linear program:
    minimize q.x subject to p.x >= 1 - eps, 0 <= x <= 1.
    """
    eps = _validate_eps(eps)
    p = np.asarray(p, dtype=float).reshape(-1)
    q = np.asarray(q, dtype=float).reshape(-1)
    if eps == 0.0:
        return float(-np.log2(np.sum(q[p > 0])))
    res = linprog(c=q, A_ub=-p[None, :], b_ub=[-(1.0 - eps)], bounds=[(0.0, 1.0)] * p.size, method="highs")
    if not res.success:
        raise NumericError(f"Classical D_H linear program failed: {res.message}")
    return float(-np.log2(res.fun))
