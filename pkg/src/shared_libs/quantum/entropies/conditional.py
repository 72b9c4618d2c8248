# src/shared_libs/quantum/entropies/conditional.py

"""
Conditional min-/max-entropy and max-information.

All three reduce to the convex program

    minimize Tr X  subject to  I_A (x) X >= M,

solved here by a log-det barrier Newton method over a Hermitian basis of X.
"""

import logging
from typing import List, NamedTuple, Sequence, Union

import numpy as np

from shared_libs.configs.config_loader import get_settings
from shared_libs.quantum import linalg
from shared_libs.quantum.entropies.schemas import EntropyResult, SolverReport
from shared_libs.quantum.states import PureVector, QuantumState, purify
from shared_libs.utils.exceptions import ConvergenceError, DimensionError
from shared_libs.utils.logging_utils import log_event

logger = logging.getLogger(__name__)

ARMIJO = 0.25
NEWTON_DECREMENT_TOL = 1e-10
RELATIVE_DECREMENT_TOL = 1e-13
STAGNATION_TOL = 1e-14


class DominatingSolution(NamedTuple):
    x: np.ndarray
    trace: float
    dual: np.ndarray        # Z >= 0 with Tr_A Z = I (approximately, at the final centering)
    gap: float
    iterations: int
    min_slack_eigenvalue: float


def hermitian_basis(d: int) -> List[np.ndarray]:
    """Hilbert-Schmidt orthonormal basis of d x d Hermitian matrices."""
    basis = []
    for i in range(d):
        e = np.zeros((d, d), dtype=np.complex128)
        e[i, i] = 1.0
        basis.append(e)
    for i in range(d):
        for j in range(i + 1, d):
            re = np.zeros((d, d), dtype=np.complex128)
            re[i, j] = re[j, i] = 1.0 / np.sqrt(2.0)
            im = np.zeros((d, d), dtype=np.complex128)
            im[i, j], im[j, i] = -1j / np.sqrt(2.0), 1j / np.sqrt(2.0)
            basis.extend([re, im])
    return basis


def _is_positive_definite(m: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(linalg.hermitize(m))
        return True
    except np.linalg.LinAlgError:
        return False


def min_trace_dominating(m: np.ndarray, d_a: int, d_b: int) -> DominatingSolution:
    """
    Solves min Tr X s.t. I_{d_a} (x) X >= M for Hermitian PSD M of size d_a*d_b.

    Barrier objective t Tr X - log det(I (x) X - M); t grows by barrier_mu until the
    duality gap (d_a d_b) / t falls below gap_tolerance relative to Tr X. Hitting the
    Newton step cap is only an error when the last centered point misses that gap.
    """
    m = linalg.hermitize(linalg.as_matrix(m))
    dim = d_a * d_b
    if m.shape[0] != dim:
        raise DimensionError(f"Operator dim {m.shape[0]} does not match {d_a} x {d_b}.")

    cfg = get_settings().solver
    basis = hermitian_basis(d_b)
    stacked = np.array(basis)
    lifted = np.array([np.kron(np.eye(d_a), e) for e in basis])          # G_k = I (x) E_k
    traces = np.array([np.real(np.trace(e)) for e in basis])

    def slack_of(coeffs: np.ndarray) -> np.ndarray:
        return linalg.hermitize(np.kron(np.eye(d_a), np.tensordot(coeffs, stacked, axes=1)) - m)

    def barrier_value(coeffs: np.ndarray, t_val: float) -> float:
        _, logdet = np.linalg.slogdet(slack_of(coeffs))
        return t_val * float(traces @ coeffs) - float(logdet)

    lam_max = float(linalg.eigvalsh(m)[-1])
    x = np.zeros(len(basis))
    x[:d_b] = lam_max + 1.0
    t = 1.0
    total_iterations = 0
    certified = None                  # (coeffs, t) of the last finished centering
    last_decrement = np.inf

    while True:
        # --- centering ---
        finished = False
        while total_iterations < cfg.max_newton_iterations:
            s_inv = np.linalg.inv(slack_of(x))
            k = np.einsum("ij,kjl->kil", s_inv, lifted)                    # S^-1 G_k
            grad = t * traces - np.real(np.einsum("kii->k", k))
            hess = np.real(np.einsum("kij,lji->kl", k, k))
            try:
                step = -np.linalg.solve(hess, grad)
            except np.linalg.LinAlgError:
                step = -np.linalg.lstsq(hess, grad, rcond=None)[0]
            decrement = float(-grad @ step)
            last_decrement = decrement
            total_iterations += 1
            f0 = barrier_value(x, t)
            # |f0| grows with t, so the floor does too
            if decrement / 2.0 <= max(NEWTON_DECREMENT_TOL, RELATIVE_DECREMENT_TOL * abs(f0)):
                finished = True
                break
            alpha = 1.0
            while alpha >= 1e-16:
                candidate = x + alpha * step
                if _is_positive_definite(slack_of(candidate)):
                    f1 = barrier_value(candidate, t)
                    if f1 <= f0 - ARMIJO * alpha * decrement:
                        break
                alpha *= 0.5
            if alpha < 1e-16:
                finished = True       # no descent left at working precision
                break
            x = candidate
            if f0 - f1 <= STAGNATION_TOL * max(1.0, abs(f0)):
                finished = True
                break

        trace_x = float(traces @ x)
        if finished:
            certified = (x.copy(), t)
        log_event(logger, "Barrier centering finished", "solver",
                  {"t": t, "trace": trace_x, "gap": dim / t, "centered": finished,
                   "iterations": total_iterations}, level=logging.DEBUG)
        if finished and dim / t <= cfg.gap_tolerance * max(trace_x, 1e-12):
            break
        if total_iterations >= cfg.max_newton_iterations:
            # near the central path (lambda <= 1/2) the gap is at most (m + lambda sqrt(m)) / t
            lam = float(np.sqrt(max(last_decrement, 0.0)))
            if lam <= 0.5 and (dim + lam * np.sqrt(dim)) / t <= cfg.gap_tolerance * max(trace_x, 1e-12):
                break
            if certified is not None:
                c_x, c_t = certified
                c_trace = float(traces @ c_x)
                if dim / c_t <= cfg.gap_tolerance * max(c_trace, 1e-12):
                    x, t = c_x, c_t
                    break
            raise ConvergenceError(
                f"Barrier method hit the iteration cap ({cfg.max_newton_iterations}).",
                iterations=total_iterations,
                best_bound=trace_x,
                details={"t": t, "relative_gap": dim / t / max(trace_x, 1e-12)},
            )
        t *= cfg.barrier_mu

    x_mat = linalg.hermitize(np.tensordot(x, stacked, axes=1))
    trace_x = float(np.real(np.trace(x_mat)))
    slack = np.kron(np.eye(d_a), x_mat) - m
    dual = linalg.hermitize(np.linalg.inv(linalg.hermitize(slack)) / t)
    return DominatingSolution(
        x=x_mat,
        trace=trace_x,
        dual=dual,
        gap=dim / t / max(trace_x, 1e-12),
        iterations=total_iterations,
        min_slack_eigenvalue=float(linalg.eigvalsh(slack)[0]),
    )


def _bipartite(state: Union[QuantumState, PureVector], a: Sequence[str], b: Sequence[str]):
    a, b = list(a), list(b)
    rho = state.marginal(a + b)
    d_a = rho.layout.select(a).total_dim
    d_b = rho.layout.select(b).total_dim
    return rho, d_a, d_b


def _report(solution: DominatingSolution, method: str) -> SolverReport:
    return SolverReport(
        iterations=solution.iterations,
        final_gap=solution.gap,
        method=method,
        notes={"trace_x": solution.trace, "primal_min_eigenvalue": solution.min_slack_eigenvalue},
    )


def hmin_cond(state: Union[QuantumState, PureVector], a: Sequence[str], b: Sequence[str]) -> EntropyResult:
    """H_min(A|B) = -log2 min{Tr X : I_A (x) X >= rho_AB}; certificate sigma_B = X*/Tr X*."""
    rho, d_a, d_b = _bipartite(state, a, b)
    solution = min_trace_dominating(rho.matrix, d_a, d_b)
    return EntropyResult(
        value=float(-np.log2(solution.trace)),
        certificate=solution.x / solution.trace,
        certificate_kind="marginal",
        solver_report=_report(solution, "logdet_barrier"),
    )


def hmax_cond(state: Union[QuantumState, PureVector], a: Sequence[str], b: Sequence[str]) -> EntropyResult:
    """H_max(A|B) = -H_min(A|C) for a purification rho_ABC; certificate is that purification."""
    rho, _, _ = _bipartite(state, a, b)
    ancilla = "_purifier"
    purification = purify(rho, ancilla_label=ancilla)
    dual = hmin_cond(purification, list(a), [ancilla])
    report = dual.solver_report.model_copy(deep=True)
    report.method = "purification_duality"
    return EntropyResult(
        value=-dual.value,
        certificate=np.array(purification.amplitudes),
        certificate_kind="purification",
        solver_report=report,
    )


def imax(state: Union[QuantumState, PureVector], a: Sequence[str], b: Sequence[str]) -> EntropyResult:
    """
    I_max(A:B) = log2 min{Tr X : rho_A (x) X >= rho_AB}, solved on supp(rho_A) after
    conjugating with rho_A^{-1/2}. Certificate is sigma_B = X*/Tr X*.
    """
    a, b = list(a), list(b)
    rho, d_a, d_b = _bipartite(state, a, b)
    values, vectors = linalg.support_basis(rho.marginal(a).matrix)
    factor = np.kron(vectors / np.sqrt(values), np.eye(d_b))               # V_A D^{-1/2} (x) I
    m = linalg.hermitize(linalg.dagger(factor) @ rho.matrix @ factor)
    solution = min_trace_dominating(m, values.size, d_b)
    return EntropyResult(
        value=float(np.log2(solution.trace)),
        certificate=solution.x / solution.trace,
        certificate_kind="marginal",
        solver_report=_report(solution, "logdet_barrier_on_support"),
    )
