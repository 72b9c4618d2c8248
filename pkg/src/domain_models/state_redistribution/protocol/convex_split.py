# src/domain_models/state_redistribution/protocol/convex_split.py

import logging
from typing import List, Optional, Sequence

import numpy as np

from shared_libs.configs.config_loader import get_settings
from shared_libs.quantum import linalg
from shared_libs.quantum.entropies import fidelity, support_contained
from shared_libs.quantum.entropies.smoothing import split_dmax
from shared_libs.quantum.states import QuantumState, RegisterLayout
from shared_libs.utils.exceptions import DimensionError, ParameterError, SupportViolationError

logger = logging.getLogger(__name__)


def copy_labels(base: Sequence[str], n: int) -> List[str]:
    """Labels Q1..Qn for the copies of a register group (joined with '+' when it has several registers)."""
    stem = "+".join(base)
    return [f"{stem}{j}" for j in range(1, n + 1)]


def _permute_matrix(m: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    k = len(dims)
    t = m.reshape(list(dims) + list(dims)).transpose(list(perm) + [k + p for p in perm])
    return t.reshape(m.shape)


def convex_split_state(rho_pq: QuantumState, p_labels: Sequence[str], q_labels: Sequence[str],
                       sigma_q: np.ndarray, n: int, max_dim: Optional[int] = None) -> QuantumState:
    """
    tau = (1/n) sum_j rho_{P Q_j} (x) sigma^{(x)(n-1)} on P, Q1..Qn.

    P and Q may each span several registers of `rho_pq`; every copy Q_j is a single
    register of dimension d_Q.
    """
    if n < 1:
        raise ParameterError(f"n must be a positive integer, got {n}.")
    max_dim = max_dim or get_settings().linalg.max_dim
    p_labels, q_labels = list(p_labels), list(q_labels)
    rho = rho_pq.marginal(p_labels + q_labels)
    d_p = rho.layout.select(p_labels).total_dim
    d_q = rho.layout.select(q_labels).total_dim
    sigma_q = linalg.as_matrix(sigma_q)
    if sigma_q.shape != (d_q, d_q):
        raise DimensionError(f"sigma_Q has shape {sigma_q.shape}, expected ({d_q}, {d_q}).")
    total = d_p * d_q ** n
    if total > max_dim:
        raise DimensionError(f"Convex split with n={n} needs dimension {total} > cap {max_dim}.",
                             required=total, cap=max_dim)
    rho_q = linalg.partial_trace(rho.matrix, [d_p, d_q], [1])
    if not support_contained(rho_q, sigma_q):
        raise SupportViolationError("supp(rho_Q) is not contained in supp(sigma_Q).")

    dims = [d_p] + [d_q] * n
    rest = linalg.tensor_all([sigma_q] * (n - 1)) if n > 1 else np.ones((1, 1), dtype=np.complex128)
    base = np.kron(rho.matrix, rest)               # order P, Q_j, Q_others
    tau = np.zeros((total, total), dtype=np.complex128)
    for j in range(n):
        # axis order of `base` is (P, Q_j, Q_1..Q_n without Q_j)
        others = [i for i in range(1, n + 1) if i != j + 1]
        current = [0, j + 1] + others
        perm = [current.index(axis) for axis in range(n + 1)]
        tau += _permute_matrix(base, dims, perm)
    tau /= n

    q_names = copy_labels(q_labels, n)
    layout = RegisterLayout.of(("+".join(p_labels), d_p), *[(name, d_q) for name in q_names])
    logger.debug(f"Convex split state built: n={n}, dim={total}.")
    return QuantumState(layout=layout, matrix=linalg.hermitize(tau))


def convex_split_fidelity(rho_pq: QuantumState, p_labels: Sequence[str], q_labels: Sequence[str],
                          sigma_q: np.ndarray, n: int) -> dict:
    """F^2(tau, tau_P (x) sigma^{(x)n}) next to the 1 - 2^k/n estimate."""
    tau = convex_split_state(rho_pq, p_labels, q_labels, sigma_q, n)
    p_name = tau.layout.labels[0]
    tau_p = tau.marginal([p_name]).matrix
    target = np.kron(tau_p, linalg.tensor_all([linalg.as_matrix(sigma_q)] * n))
    f = fidelity(tau.matrix, target)
    rho = rho_pq.marginal(list(p_labels) + list(q_labels))
    d_p = rho.layout.select(p_labels).total_dim
    d_q = rho.layout.select(q_labels).total_dim
    k = split_dmax(rho.matrix, d_p, d_q, linalg.as_matrix(sigma_q))
    k_bits = k.bits
    return {
        "fidelity_squared": f ** 2,
        "k": k_bits,
        "estimate": 1.0 - 2.0 ** k_bits / n if np.isfinite(k_bits) else -np.inf,
    }
