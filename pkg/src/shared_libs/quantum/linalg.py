# src/shared_libs/quantum/linalg.py

"""
Dense complex linear algebra primitives for QSR Lab.

Every operator in the lab (states, tests, isometry blocks) is carried as a square
`numpy.ndarray` of dtype complex128. All functions here are pure: they never mutate
their arguments and return fresh arrays.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from shared_libs.configs.config_loader import get_settings
from shared_libs.utils.exceptions import (
    ContractViolationError,
    ConvergenceError,
    DimensionError,
    NotPSDError,
)

logger = logging.getLogger(__name__)

ComplexMatrix = np.ndarray


# --- 1. TYPES ---

@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and the matching unitary of column eigenvectors."""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> ComplexMatrix:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


class SVDResult(NamedTuple):
    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


class OperatorComparison(NamedTuple):
    holds: bool
    witness: float


class MatrixFunction(str, Enum):
    SQRT = "sqrt"
    INV_SQRT_ON_SUPPORT = "inv_sqrt_on_support"
    LOG2_ON_SUPPORT = "log2_on_support"


# --- 2. BASIC HELPERS ---

def as_matrix(m) -> ComplexMatrix:
    """Coerces `m` to a square complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"Expected a square matrix, got shape {arr.shape}.")
    return arr


def dagger(m: ComplexMatrix) -> ComplexMatrix:
    return np.conj(m).T


def hermitize(m: ComplexMatrix) -> ComplexMatrix:
    """Symmetrizes rounding noise away: (M + M^dag) / 2."""
    return 0.5 * (m + dagger(m))


def hermitian_defect(m: ComplexMatrix) -> float:
    return float(np.max(np.abs(m - dagger(m)))) if m.size else 0.0


def is_hermitian(m: ComplexMatrix, tol: Optional[float] = None) -> bool:
    """Entrywise max|M - M^dag| <= tol, scaled by max(1, max|M_ij|)."""
    m = as_matrix(m)
    tol = get_settings().linalg.hermitian_tol if tol is None else tol
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return hermitian_defect(m) <= tol * scale


def require_hermitian(m, name: str = "matrix") -> ComplexMatrix:
    m = as_matrix(m)
    if not is_hermitian(m):
        raise ContractViolationError(
            f"{name} is not Hermitian (max|M - M^dag| = {hermitian_defect(m):.3e})."
        )
    return m


def identity(d: int) -> ComplexMatrix:
    return np.eye(d, dtype=np.complex128)


def projector(vector: np.ndarray) -> ComplexMatrix:
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())


# --- 3. TENSOR STRUCTURE ---

def tensor(a: ComplexMatrix, b: ComplexMatrix, max_dim: Optional[int] = None) -> ComplexMatrix:
    """Kronecker product with `a`'s index major."""
    a, b = as_matrix(a), as_matrix(b)
    cap = get_settings().linalg.max_dim if max_dim is None else max_dim
    dim = a.shape[0] * b.shape[0]
    if dim > cap:
        raise DimensionError(f"Tensor product dimension {dim} exceeds max_dim {cap}.", required=dim, cap=cap)
    return np.kron(a, b)


def tensor_all(factors: Sequence[ComplexMatrix], max_dim: Optional[int] = None) -> ComplexMatrix:
    result = np.ones((1, 1), dtype=np.complex128)
    for factor in factors:
        result = tensor(result, factor, max_dim=max_dim)
    return result


def partial_trace(m: ComplexMatrix, dims: Sequence[int], keep: Sequence[int]) -> ComplexMatrix:
    """
    Traces out every factor not listed in `keep`.

    The kept factors appear in the order given by `keep`, so the call doubles as a
    factor permutation. An empty `keep` returns the 1x1 matrix [Tr m].
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    if int(np.prod(dims)) != m.shape[0]:
        raise DimensionError(f"Factor dims {dims} do not multiply to matrix dim {m.shape[0]}.")
    keep = [int(k) for k in keep]
    if len(set(keep)) != len(keep) or any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionError(f"Invalid keep set {keep} for {len(dims)} factors.")

    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    d_traced = int(np.prod([dims[i] for i in traced])) if traced else 1

    t = m.reshape(dims + dims)
    perm = keep + traced + [n + i for i in keep] + [n + i for i in traced]
    t = t.transpose(perm).reshape(d_keep, d_traced, d_keep, d_traced)
    return np.einsum("ajbj->ab", t)


# --- 4. EIGENSOLVERS ---

def _canonicalize(eigenvalues: np.ndarray, eigenvectors: np.ndarray) -> EigenDecomposition:
    """Ascending order; each column's largest-magnitude entry made real positive."""
    order = np.argsort(eigenvalues, kind="stable")
    values = np.asarray(eigenvalues, dtype=float)[order]
    vectors = np.array(eigenvectors[:, order], dtype=np.complex128)
    if vectors.size:
        pivots = np.argmax(np.abs(vectors), axis=0)
        phases = vectors[pivots, np.arange(vectors.shape[1])]
        magnitudes = np.abs(phases)
        magnitudes[magnitudes == 0] = 1.0
        vectors = vectors * (np.conj(phases) / magnitudes)
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenDecomposition(eigenvalues=values, eigenvectors=vectors)


def jacobi_eigh(m: ComplexMatrix, max_sweeps: Optional[int] = None) -> EigenDecomposition:
    """
    Cyclic Jacobi eigensolver for complex Hermitian matrices.

    Each (p, q) rotation first removes the phase of M_pq and then applies the real
    symmetric Jacobi rotation. Pairs are visited in fixed row-major order, so the
    output is reproducible bit for bit.
    """
    a = hermitize(require_hermitian(m)).copy()
    sweeps_cap = get_settings().linalg.jacobi_max_sweeps if max_sweeps is None else max_sweeps
    d = a.shape[0]
    v = identity(d)
    scale = max(float(np.linalg.norm(a)), np.finfo(float).tiny)

    for sweep in range(sweeps_cap + 1):
        off = float(np.sqrt(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2)))
        if off <= 1e-15 * scale:
            logger.debug(f"Jacobi converged after {sweep} sweeps (off-norm {off:.2e}).")
            return _canonicalize(np.real(np.diag(a)), v)
        if sweep == sweeps_cap:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                r = abs(a[p, q])
                if r <= 1e-300:
                    continue
                phase = a[p, q] / r
                theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0)) if theta != 0 else 1.0
                c = 1.0 / np.hypot(t, 1.0)
                s = t * c
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = dagger(g) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g

    raise ConvergenceError(
        f"Jacobi eigensolver did not converge within {sweeps_cap} sweeps.",
        iterations=sweeps_cap,
        details={"off_norm": off},
    )


def eig_hermitian(m: ComplexMatrix, backend: Optional[str] = None) -> EigenDecomposition:
    """
    Hermitian eigendecomposition with the lab-wide canonical convention.

    backend: "lapack" (numpy.linalg.eigh) or "jacobi"; defaults to the configured one.
    """
    m = require_hermitian(m)
    backend = backend or get_settings().linalg.eig_backend
    if backend == "jacobi":
        return jacobi_eigh(m)
    if backend != "lapack":
        raise ContractViolationError(f"Unknown eigensolver backend '{backend}'.")
    try:
        values, vectors = np.linalg.eigh(hermitize(m))
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"LAPACK eigh failed: {e}", iterations=0) from e
    return _canonicalize(values, vectors)


def eigvalsh(m: ComplexMatrix) -> np.ndarray:
    """Ascending eigenvalues only."""
    m = require_hermitian(m)
    return np.linalg.eigvalsh(hermitize(m))


def svd(m: ComplexMatrix) -> SVDResult:
    """m = u diag(s) v^dag with s descending."""
    m = np.asarray(m, dtype=np.complex128)
    try:
        u, s, vh = np.linalg.svd(m)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(f"SVD did not converge: {e}", iterations=0) from e
    return SVDResult(u=u, s=s, v=dagger(vh))


def trace_norm(m: ComplexMatrix) -> float:
    return float(np.sum(np.linalg.svd(np.asarray(m, dtype=np.complex128), compute_uv=False)))


# --- 5. SPECTRAL FUNCTIONS ---

def _clipped_spectrum(m: ComplexMatrix):
    decomposition = eig_hermitian(m)
    values = np.array(decomposition.eigenvalues)
    lam_max = float(values[-1]) if values.size else 0.0
    clip = get_settings().linalg.psd_clip * max(1.0, abs(lam_max))
    if values.size and values[0] < -clip:
        raise NotPSDError(
            f"Operator has eigenvalue {values[0]:.3e} below -{clip:.1e}.",
            min_eigenvalue=float(values[0]),
        )
    values[values < 0] = 0.0
    cutoff = get_settings().linalg.support_cutoff * lam_max if lam_max > 0 else np.inf
    return values, decomposition.eigenvectors, values > cutoff


def matrix_function(m: ComplexMatrix, f) -> ComplexMatrix:
    """
    Applies `f` to the eigenvalues of a PSD matrix.

    Eigenvalues at or below support_cutoff * lambda_max count as exact zeros; the
    on-support functions send them to 0 (projector-on-support convention).
    """
    f = MatrixFunction(f)
    values, vectors, support = _clipped_spectrum(m)
    mapped = np.zeros_like(values)
    if f is MatrixFunction.SQRT:
        mapped = np.sqrt(values)
    elif f is MatrixFunction.INV_SQRT_ON_SUPPORT:
        mapped[support] = 1.0 / np.sqrt(values[support])
    else:
        mapped[support] = np.log2(values[support])
    return (vectors * mapped) @ dagger(vectors)


def support_projector(m: ComplexMatrix, cutoff: Optional[float] = None) -> ComplexMatrix:
    """Projector onto eigenvectors with eigenvalue above cutoff * lambda_max."""
    decomposition = eig_hermitian(m)
    values = decomposition.eigenvalues
    lam_max = float(values[-1]) if values.size else 0.0
    if lam_max <= 0:
        return np.zeros_like(as_matrix(m))
    rel = get_settings().linalg.support_cutoff if cutoff is None else cutoff
    cols = decomposition.eigenvectors[:, values > rel * lam_max]
    return cols @ dagger(cols)


def support_basis(m: ComplexMatrix) -> List[np.ndarray]:
    """(eigenvalues, eigenvectors) restricted to the support, ascending."""
    values, vectors, support = _clipped_spectrum(m)
    return [values[support], vectors[:, support]]


def rank(m: ComplexMatrix) -> int:
    _, _, support = _clipped_spectrum(m)
    return int(np.count_nonzero(support))


def is_psd(m: ComplexMatrix, tol: Optional[float] = None) -> bool:
    m = as_matrix(m)
    if not is_hermitian(m):
        return False
    tol = get_settings().linalg.psd_clip if tol is None else tol
    values = eigvalsh(m)
    return bool(values.size == 0 or values[0] >= -tol * max(1.0, abs(values[-1])))


def positive_part_projector(m: ComplexMatrix) -> ComplexMatrix:
    """Projector onto the strictly positive eigenspace of a Hermitian matrix."""
    decomposition = eig_hermitian(m)
    cols = decomposition.eigenvectors[:, decomposition.eigenvalues > 0]
    return cols @ dagger(cols)


def operator_leq(a: ComplexMatrix, b: ComplexMatrix, slack: float = 0.0) -> OperatorComparison:
    """a <= b in Loewner order iff lambda_min(b - a) >= -slack."""
    a = require_hermitian(a, "a")
    b = require_hermitian(b, "b")
    if a.shape != b.shape:
        raise DimensionError(f"Operator shapes differ: {a.shape} vs {b.shape}.")
    witness = float(eigvalsh(hermitize(b - a))[0])
    return OperatorComparison(holds=witness >= -slack, witness=witness)
