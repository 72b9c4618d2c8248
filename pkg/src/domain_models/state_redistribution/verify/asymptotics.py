# src/domain_models/state_redistribution/verify/asymptotics.py

"""
i.i.d. trend of the hypothesis-testing relative entropy.

D_H^eps(rho^n || sigma^n) = n D + sqrt(n V) Phi^{-1}(eps) + O(log n); the sweep only
checks the first-order behaviour, inside a loose envelope c sqrt(n) + c'.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from scipy.stats import norm

from domain_models.state_redistribution.protocol.redistribution import kron_power
from domain_models.state_redistribution.schemas import SweepPoint, SweepReport
from shared_libs.configs.config_loader import get_settings
from shared_libs.quantum import linalg
from shared_libs.quantum.entropies import classical_dh_lp, dh_eps, information_variance, relative_entropy
from shared_libs.quantum.entropies.basic import StateLike, as_operator
from shared_libs.utils.exceptions import DimensionError, ParameterError, SupportViolationError

logger = logging.getLogger(__name__)

COMMUTATOR_TOLERANCE = 1e-10
ORACLE_TOLERANCE = 1e-8
ENVELOPE_OFFSET = 10.0


def joint_spectrum(rho: np.ndarray, sigma: np.ndarray) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Diagonals of rho and sigma in a common eigenbasis, or None when they do not commute."""
    if np.max(np.abs(rho @ sigma - sigma @ rho)) > COMMUTATOR_TOLERANCE:
        return None
    basis = linalg.eig_hermitian(linalg.hermitize(rho + math.sqrt(2.0) * sigma)).eigenvectors
    rho_d = linalg.dagger(basis) @ rho @ basis
    sigma_d = linalg.dagger(basis) @ sigma @ basis
    off = max(np.max(np.abs(rho_d - np.diag(np.diag(rho_d)))), np.max(np.abs(sigma_d - np.diag(np.diag(sigma_d)))))
    if off > COMMUTATOR_TOLERANCE:
        return None
    return np.clip(np.real(np.diag(rho_d)), 0.0, None), np.clip(np.real(np.diag(sigma_d)), 0.0, None)


def envelope_constants(variance: float, eps: float) -> Tuple[float, float]:
    """c = 3 sqrt(V) max(1, |Phi^-1(eps)|), c' = 10 bits."""
    return 3.0 * math.sqrt(variance) * max(1.0, abs(float(norm.ppf(eps)))), ENVELOPE_OFFSET


def asymptotic_sweep(rho: StateLike, sigma: StateLike, eps: float, n_max: int) -> SweepReport:
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}.")
    if n_max < 1:
        raise ParameterError(f"n_max must be positive, got {n_max}.")
    rho, sigma = as_operator(rho), as_operator(sigma)
    if rho.shape != sigma.shape:
        raise DimensionError(f"Operators act on different spaces: {rho.shape} vs {sigma.shape}.")

    d = rho.shape[0]
    cap = get_settings().verify.sweep_max_dim
    if d > cap:
        raise DimensionError(f"Single-copy dimension {d} exceeds the sweep cap {cap}.", required=d, cap=cap)

    divergence = relative_entropy(rho, sigma)
    if divergence.infinite:
        raise SupportViolationError("supp(rho) is not contained in supp(sigma): D(rho||sigma) is infinite.")
    d_rel = divergence.value
    variance = information_variance(rho, sigma)
    c, c_prime = envelope_constants(variance, eps)
    spectra = joint_spectrum(rho, sigma)

    notes: List[str] = []
    n_last = n_max
    while n_last > 1 and d ** n_last > cap:
        n_last -= 1
    truncated = n_last < n_max
    if truncated:
        notes.append(f"Sweep truncated at n={n_last}: d^{n_last + 1} = {d ** (n_last + 1)} exceeds cap {cap}.")
        logger.warning(notes[-1])
    if spectra is None:
        notes.append("Inputs do not commute; classical oracle skipped.")

    points: List[SweepPoint] = []
    for n in range(1, n_last + 1):
        value = dh_eps(kron_power(rho, n), kron_power(sigma, n), eps).bits
        reference = n * d_rel
        gap = value - reference
        envelope = c * math.sqrt(n) + c_prime
        oracle = oracle_error = None
        if spectra is not None:
            oracle = classical_dh_lp(kron_power(spectra[0], n), kron_power(spectra[1], n), eps)
            oracle_error = abs(oracle - value)
        points.append(SweepPoint(n=n, value=value, reference=reference, gap=gap, envelope=envelope,
                                 within_envelope=abs(gap) <= envelope, oracle=oracle, oracle_error=oracle_error))
        logger.debug(f"Sweep n={n}: D_H={value:.12g}, nD={reference:.12g}, gap={gap:.3e}.")

    passed = all(p.within_envelope and (p.oracle_error is None or p.oracle_error <= ORACLE_TOLERANCE)
                 for p in points)
    return SweepReport(eps=eps, n_max=n_max, relative_entropy=d_rel, variance=variance, c=c, c_prime=c_prime,
                       commuting=spectra is not None, truncated=truncated, points=points, notes=notes,
                       passed=passed)
