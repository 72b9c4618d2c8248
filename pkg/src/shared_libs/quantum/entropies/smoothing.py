# src/shared_libs/quantum/entropies/smoothing.py

"""
Feasible-point smoothing.

Each smoothed quantity is evaluated on mixtures rho' = (1 - p) rho + p tau for a
few ansatz states tau, with p limited so that P(rho', rho) <= eps. The purified
distance to rho is concave-decreasing in fidelity along the segment, so the
largest admissible p is found by bisection and a grid of weights in [0, p_max]
is scanned. p = 0 is always part of the grid, which makes every returned value
a valid bound on the true smoothed quantity (an upper bound for infimum-type
smoothing, a lower bound for supremum-type smoothing), never the exact optimum.
"""

import logging
from typing import Callable, List, NamedTuple, Optional, Sequence, Union

import numpy as np

from shared_libs.configs.config_loader import get_settings
from shared_libs.quantum import linalg
from shared_libs.quantum.entropies.basic import StateLike, as_operator, dmax, purified_distance
from shared_libs.quantum.entropies.conditional import hmax_cond, hmin_cond, imax
from shared_libs.quantum.entropies.schemas import EntropyResult, SolverReport
from shared_libs.quantum.states import PureVector, QuantumState
from shared_libs.utils.exceptions import ParameterError

logger = logging.getLogger(__name__)

WEIGHT_BISECTION_STEPS = 60


class Mixer(NamedTuple):
    name: str
    tau: np.ndarray


def _validate(eps: float) -> float:
    eps = float(eps)
    if not 0.0 <= eps < 1.0:
        raise ParameterError(f"Smoothing eps must lie in [0, 1), got {eps}.")
    return eps


def max_mixing_weight(rho: np.ndarray, tau: np.ndarray, eps: float) -> float:
    """Largest p in [0, 1] with P((1 - p) rho + p tau, rho) <= eps."""
    if purified_distance(tau, rho) <= eps:
        return 1.0
    lo, hi = 0.0, 1.0
    for _ in range(WEIGHT_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if purified_distance((1.0 - mid) * rho + mid * tau, rho) <= eps:
            lo = mid
        else:
            hi = mid
    return lo


def _smooth_search(rho: np.ndarray, eps: float, mixers: Sequence[Mixer],
                   objective: Callable[[np.ndarray], EntropyResult],
                   budget: Optional[int], maximize: bool) -> EntropyResult:
    eps = _validate(eps)
    budget = get_settings().solver.smoothing_budget if budget is None else int(budget)
    if budget < 1:
        raise ParameterError(f"ansatz_budget must be >= 1, got {budget}.")

    def better(candidate: EntropyResult, incumbent: EntropyResult) -> bool:
        return candidate.bits > incumbent.bits if maximize else candidate.bits < incumbent.bits

    best = objective(rho)
    best_state, best_note = rho, {"mixer": "none", "weight": 0.0, "purified_distance": 0.0}
    evaluations = 1

    if eps > 0.0 and budget > 1:
        for mixer in mixers:
            p_max = max_mixing_weight(rho, mixer.tau, eps)
            if p_max <= 0.0:
                continue
            for p in np.linspace(0.0, p_max, budget)[1:]:
                candidate_state = linalg.hermitize((1.0 - p) * rho + p * mixer.tau)
                candidate = objective(candidate_state)
                evaluations += 1
                if better(candidate, best):
                    best, best_state = candidate, candidate_state
                    best_note = {"mixer": mixer.name, "weight": float(p)}

    distance = purified_distance(best_state, rho)
    best_note["purified_distance"] = distance
    if distance > eps + 1e-12:
        logger.warning(f"Smoothed candidate at distance {distance:.3e} exceeds eps {eps}; falling back to rho.")
        best, best_state = objective(rho), rho
        best_note = {"mixer": "none", "weight": 0.0, "purified_distance": 0.0}

    report = SolverReport(
        iterations=evaluations,
        method="mixture_ansatz",
        notes={"eps": eps, "feasible_point_bound": True, **best_note,
               "inner_method": best.solver_report.method},
    )
    if best.infinite:
        result = EntropyResult.infinity(best.solver_report.notes.get("reason", "infinite"),
                                        sign=best.solver_report.notes.get("sign", 1))
        result.solver_report.notes.update(report.notes)
        result.certificate, result.certificate_kind = best_state, "state"
        return result
    return EntropyResult(value=best.value, certificate=best_state, certificate_kind="state", solver_report=report)


def clipped_state(rho: np.ndarray, sigma: np.ndarray) -> Optional[np.ndarray]:
    """
    sigma^1/2 min(Gamma, gamma_2) sigma^1/2 (normalized) with Gamma = sigma^-1/2 rho sigma^-1/2
    and gamma_2 its second largest eigenvalue; None when the spectrum has no spike to clip.
    """
    inv_sqrt = linalg.matrix_function(sigma, "inv_sqrt_on_support")
    sqrt = linalg.matrix_function(sigma, "sqrt")
    decomposition = linalg.eig_hermitian(linalg.hermitize(inv_sqrt @ rho @ inv_sqrt))
    values = decomposition.eigenvalues
    if values.size < 2 or values[-1] - values[-2] <= 1e-12 * max(1.0, values[-1]):
        return None
    clipped = np.minimum(values, values[-2])
    gamma = (decomposition.eigenvectors * clipped) @ linalg.dagger(decomposition.eigenvectors)
    state = linalg.hermitize(sqrt @ gamma @ sqrt)
    trace = float(np.real(np.trace(state)))
    if trace <= 0:
        return None
    return state / trace


# --- Smoothed max-relative entropies ---

def smooth_dmax(rho: StateLike, sigma: StateLike, eps: float, ansatz_budget: Optional[int] = None) -> EntropyResult:
    """
    Feasible upper bound on inf_{rho' in B^eps(rho)} D_max(rho'||sigma); never above dmax(rho, sigma).
    Mixers: sigma itself and the eigenvalue-clipped state.
    """
    rho, sigma = as_operator(rho), as_operator(sigma)
    mixers = [Mixer("sigma", sigma)]
    clipped = None if dmax(rho, sigma).infinite else clipped_state(rho, sigma)
    if clipped is not None:
        mixers.append(Mixer("clipped", clipped))
    return _smooth_search(rho, eps, mixers, lambda state: dmax(state, sigma), ansatz_budget, maximize=False)


def _bipartite_matrix(state: Union[QuantumState, PureVector], a: Sequence[str], b: Sequence[str]):
    a, b = list(a), list(b)
    rho = state.marginal(a + b)
    return rho.matrix, rho.layout.select(a).total_dim, rho.layout.select(b).total_dim, rho.layout


def _marginal_first(m: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    return linalg.partial_trace(m, [d_a, d_b], [0])


def _marginal_second(m: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    return linalg.partial_trace(m, [d_a, d_b], [1])


def split_dmax(rho_pq: np.ndarray, d_p: int, d_q: int, sigma_q: np.ndarray) -> EntropyResult:
    """D_max(rho_PQ || rho_P (x) sigma_Q)."""
    return dmax(rho_pq, np.kron(_marginal_first(rho_pq, d_p, d_q), sigma_q))


def smooth_split_dmax(state: Union[QuantumState, PureVector], p: Sequence[str], q: Sequence[str],
                      sigma_q: StateLike, eps: float, ansatz_budget: Optional[int] = None) -> EntropyResult:
    """
    Feasible upper bound on k = inf_{rho' in B^eps(rho_PQ)} D_max(rho'_PQ || rho'_P (x) sigma_Q),
    the quantity that sets the number of convex-split copies.
    """
    rho, d_p, d_q, _ = _bipartite_matrix(state, p, q)
    sigma_q = as_operator(sigma_q)
    reference = np.kron(_marginal_first(rho, d_p, d_q), sigma_q)
    mixers = [Mixer("marginal_product", reference)]
    if not dmax(rho, reference).infinite:
        clipped = clipped_state(rho, reference)
        if clipped is not None:
            mixers.append(Mixer("clipped", clipped))
    return _smooth_search(rho, eps, mixers, lambda m: split_dmax(m, d_p, d_q, sigma_q), ansatz_budget, maximize=False)


# --- Smoothed conditional entropies and max-information ---

def _as_state(matrix: np.ndarray, layout) -> QuantumState:
    return QuantumState(layout=layout, matrix=matrix / np.real(np.trace(matrix)))


def hmin_eps(state: Union[QuantumState, PureVector], a: Sequence[str], b: Sequence[str],
             eps: float, ansatz_budget: Optional[int] = None) -> EntropyResult:
    """Feasible lower bound on sup_{rho' in B^eps} H_min(A|B)_rho' (mixing towards I_A/d_A (x) rho_B)."""
    a, b = list(a), list(b)
    rho, d_a, d_b, layout = _bipartite_matrix(state, a, b)
    decoupled = np.kron(np.eye(d_a) / d_a, _marginal_second(rho, d_a, d_b))
    objective = lambda m: hmin_cond(_as_state(m, layout), a, b)
    return _smooth_search(rho, eps, [Mixer("decoupled", decoupled)], objective, ansatz_budget, maximize=True)


def _spectral_mixers(rho: np.ndarray) -> List[Mixer]:
    values, vectors = linalg.support_basis(rho)
    mixers = [Mixer("top_eigenvector", linalg.projector(vectors[:, -1]))]
    if values.size > 1:
        kept = vectors[:, 1:]
        truncated = (kept * values[1:]) @ linalg.dagger(kept)
        mixers.append(Mixer("truncated", truncated / np.real(np.trace(truncated))))
    return mixers


def hmax_eps(state: Union[QuantumState, PureVector], a: Sequence[str], b: Sequence[str],
             eps: float, ansatz_budget: Optional[int] = None) -> EntropyResult:
    """Feasible upper bound on inf_{rho' in B^eps} H_max(A|B)_rho' (mixing towards purer states)."""
    a, b = list(a), list(b)
    rho, _, _, layout = _bipartite_matrix(state, a, b)
    objective = lambda m: hmax_cond(_as_state(m, layout), a, b)
    return _smooth_search(rho, eps, _spectral_mixers(rho), objective, ansatz_budget, maximize=False)


def imax_eps(state: Union[QuantumState, PureVector], a: Sequence[str], b: Sequence[str],
             eps: float, ansatz_budget: Optional[int] = None) -> EntropyResult:
    """Feasible upper bound on inf_{rho' in B^eps} I_max(A:B)_rho' (mixing towards rho_A (x) rho_B)."""
    a, b = list(a), list(b)
    rho, d_a, d_b, layout = _bipartite_matrix(state, a, b)
    decoupled = np.kron(_marginal_first(rho, d_a, d_b), _marginal_second(rho, d_a, d_b))
    objective = lambda m: imax(_as_state(m, layout), a, b)
    return _smooth_search(rho, eps, [Mixer("product_of_marginals", decoupled)], objective, ansatz_budget, maximize=False)
