# src/domain_models/state_redistribution/verify/generators.py

"""Seeded random inputs for the checker suites (all draws go through one Generator)."""

from typing import Sequence, Tuple

import numpy as np

from shared_libs.quantum import linalg
from shared_libs.quantum.states import PureVector, QuantumState, RegisterLayout


def random_unitary(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar unitary from the QR decomposition of a complex Ginibre matrix."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_density(rng: np.random.Generator, d: int) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    gg = g @ g.conj().T
    return linalg.hermitize(gg / np.real(np.trace(gg)))


def random_contraction(rng: np.random.Generator, d: int, floor: float = 0.0) -> np.ndarray:
    """0 <= S <= I with eigenvalues uniform in [floor, 1]."""
    u = random_unitary(rng, d)
    values = rng.uniform(floor, 1.0, size=d)
    return linalg.hermitize((u * values) @ u.conj().T)


def random_psd(rng: np.random.Generator, d: int, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return linalg.hermitize(scale * (g @ g.conj().T) / d)


def random_pure(rng: np.random.Generator, registers: Sequence[Tuple[str, int]]) -> PureVector:
    layout = RegisterLayout.of(*registers)
    g = rng.standard_normal(layout.total_dim) + 1j * rng.standard_normal(layout.total_dim)
    return PureVector(layout=layout, amplitudes=g / np.linalg.norm(g))


def random_mixed_state(rng: np.random.Generator, registers: Sequence[Tuple[str, int]]) -> QuantumState:
    layout = RegisterLayout.of(*registers)
    return QuantumState(layout=layout, matrix=random_density(rng, layout.total_dim))
