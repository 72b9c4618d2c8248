# src/shared_libs/quantum/entropies/basic.py

import logging
from typing import NamedTuple, Sequence, Union

import numpy as np

from shared_libs.quantum import linalg
from shared_libs.quantum.entropies.schemas import EntropyResult, SolverReport
from shared_libs.quantum.states import PureVector, QuantumState
from shared_libs.utils.exceptions import DimensionError

logger = logging.getLogger(__name__)

StateLike = Union[QuantumState, np.ndarray]

SUPPORT_TOLERANCE = 1e-8
FIDELITY_FLOOR = 1e-14


def as_operator(state: StateLike) -> np.ndarray:
    if isinstance(state, QuantumState):
        return state.matrix
    if isinstance(state, PureVector):
        return state.density().matrix
    return linalg.as_matrix(state)


def _same_dims(rho: np.ndarray, sigma: np.ndarray) -> None:
    if rho.shape != sigma.shape:
        raise DimensionError(f"Operators act on different spaces: {rho.shape} vs {sigma.shape}.")


def support_contained(rho: StateLike, sigma: StateLike, tol: float = SUPPORT_TOLERANCE) -> bool:
    """supp(rho) within supp(sigma), measured as Tr(rho (I - P_sigma)) <= tol."""
    rho, sigma = as_operator(rho), as_operator(sigma)
    outside = np.eye(sigma.shape[0]) - linalg.support_projector(sigma)
    return float(np.real(np.trace(rho @ outside))) <= tol


# --- Fidelity ---

class FidelityResult(NamedTuple):
    fidelity: float
    purified_distance: float


def fidelity_and_distance(rho: StateLike, sigma: StateLike) -> FidelityResult:
    """F = ||sqrt(rho) sqrt(sigma)||_1 and P = sqrt(1 - F^2), F clipped to [0, 1]."""
    rho, sigma = as_operator(rho), as_operator(sigma)
    _same_dims(rho, sigma)
    f = linalg.trace_norm(
        linalg.matrix_function(rho, "sqrt") @ linalg.matrix_function(sigma, "sqrt")
    )
    f = min(max(f, 0.0), 1.0)
    return FidelityResult(fidelity=f, purified_distance=float(np.sqrt(max(0.0, 1.0 - f * f))))


def fidelity(rho: StateLike, sigma: StateLike) -> float:
    return fidelity_and_distance(rho, sigma).fidelity


def purified_distance(rho: StateLike, sigma: StateLike) -> float:
    return fidelity_and_distance(rho, sigma).purified_distance


def d_half(rho: StateLike, sigma: StateLike) -> EntropyResult:
    """Sandwiched Renyi-1/2 divergence, -2 log2 F."""
    f = fidelity(rho, sigma)
    if f <= FIDELITY_FLOOR:
        return EntropyResult.infinity("orthogonal supports (F = 0)")
    return EntropyResult(value=float(-2.0 * np.log2(f)), solver_report=SolverReport(notes={"fidelity": f}))


# --- Von Neumann quantities ---

def von_neumann(rho: StateLike) -> float:
    """S(rho) in bits with 0 log 0 = 0."""
    values, _ = linalg.support_basis(as_operator(rho))
    return float(-np.sum(values * np.log2(values)))


def relative_entropy(rho: StateLike, sigma: StateLike) -> EntropyResult:
    rho, sigma = as_operator(rho), as_operator(sigma)
    _same_dims(rho, sigma)
    if not support_contained(rho, sigma):
        return EntropyResult.infinity("supp(rho) not contained in supp(sigma)")
    value = np.real(np.trace(rho @ (linalg.matrix_function(rho, "log2_on_support")
                                    - linalg.matrix_function(sigma, "log2_on_support"))))
    return EntropyResult(value=float(value))


def information_variance(rho: StateLike, sigma: StateLike) -> float:
    """V(rho||sigma) = Tr rho (log rho - log sigma)^2 - D(rho||sigma)^2."""
    rho, sigma = as_operator(rho), as_operator(sigma)
    d = relative_entropy(rho, sigma)
    if d.infinite:
        return float("inf")
    diff = linalg.matrix_function(rho, "log2_on_support") - linalg.matrix_function(sigma, "log2_on_support")
    second = float(np.real(np.trace(rho @ diff @ diff)))
    return max(0.0, second - d.value ** 2)


def _entropy_of(state: Union[QuantumState, PureVector], labels: Sequence[str]) -> float:
    if not labels:
        return 0.0
    return von_neumann(state.marginal(list(labels)))


def mutual_information(state: Union[QuantumState, PureVector], a: Sequence[str], b: Sequence[str]) -> float:
    """I(A:B) = S(A) + S(B) - S(AB)."""
    a, b = list(a), list(b)
    return _entropy_of(state, a) + _entropy_of(state, b) - _entropy_of(state, a + b)


def cond_mutual_information(state: Union[QuantumState, PureVector], a: Sequence[str],
                            b: Sequence[str], c: Sequence[str]) -> float:
    """I(A:B|C) = S(AC) + S(BC) - S(ABC) - S(C)."""
    a, b, c = list(a), list(b), list(c)
    value = (_entropy_of(state, a + c) + _entropy_of(state, b + c)
             - _entropy_of(state, a + b + c) - _entropy_of(state, c))
    if value < -1e-9:
        logger.warning(f"Conditional mutual information {value:.3e} < 0: strong subadditivity violated numerically.")
    return value


# --- Max-relative entropy ---

def dmax(rho: StateLike, sigma: StateLike) -> EntropyResult:
    """log2 lambda_max(sigma^-1/2 rho sigma^-1/2) on supp(sigma); certificate is the top eigenprojector."""
    rho, sigma = as_operator(rho), as_operator(sigma)
    _same_dims(rho, sigma)
    if not support_contained(rho, sigma):
        return EntropyResult.infinity("supp(rho) not contained in supp(sigma)")
    inv_sqrt = linalg.matrix_function(sigma, "inv_sqrt_on_support")
    gamma = linalg.hermitize(inv_sqrt @ rho @ inv_sqrt)
    decomposition = linalg.eig_hermitian(gamma)
    lam = float(decomposition.eigenvalues[-1])
    top = linalg.projector(decomposition.eigenvectors[:, -1])
    return EntropyResult(
        value=float(np.log2(lam)),
        certificate=top,
        certificate_kind="eigenprojector",
        solver_report=SolverReport(method="eigen", notes={"lambda_max": lam}),
    )


def min_entropy(rho: StateLike) -> float:
    """H_inf(rho) = -log2 lambda_max."""
    return float(-np.log2(linalg.eigvalsh(as_operator(rho))[-1]))


def max_rank_entropy(rho: StateLike) -> float:
    """H_0(rho) = log2 rank."""
    return float(np.log2(linalg.rank(as_operator(rho))))
