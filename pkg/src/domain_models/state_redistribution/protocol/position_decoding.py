# src/domain_models/state_redistribution/protocol/position_decoding.py

"""
Position-based decoding: locate the slot C_j that is correlated with B.

Pi_j applies the hypothesis test Pi_BC to (B, C_j); the decoder is the coherent
square-root measurement built from the Pi_j, with an extra inert outcome 0 for
the part of the space outside supp(sum_j Pi_j).
"""

import logging
from typing import Sequence, Tuple

import numpy as np

from domain_models.state_redistribution.schemas import PositionOperators
from shared_libs.quantum import linalg
from shared_libs.quantum.linalg import MatrixFunction
from shared_libs.utils.exceptions import DimensionError, NumericError, ParameterError

logger = logging.getLogger(__name__)

DECODER_TOLERANCE = 1e-8


def index_split(j: int, n: int, b: int) -> Tuple[int, int]:
    """j in 1..n -> (block j1 = floor((j-1)/b), position j2 in 1..b)."""
    if b < 1 or n < 1:
        raise ParameterError(f"n and b must be positive, got n={n}, b={b}.")
    if not 1 <= j <= n:
        raise ParameterError(f"Index j={j} outside 1..{n}.")
    j1 = (j - 1) // b
    j2 = j % b
    return j1, (j2 if j2 != 0 else b)


def block_count(n: int, b: int) -> int:
    """Dimension of the block register J1: floor((n-1)/b) + 1."""
    return (n - 1) // b + 1


def index_split_matrix(n: int, b: int) -> np.ndarray:
    """W: J (dim n) -> J1 (x) J2 (dims block_count, b); J2 value j2 stored at index j2 - 1."""
    m1 = block_count(n, b)
    w = np.zeros((m1 * b, n), dtype=np.complex128)
    for j in range(1, n + 1):
        j1, j2 = index_split(j, n, b)
        w[j1 * b + (j2 - 1), j - 1] = 1.0
    return w


def place_at_slot(op: np.ndarray, rest: np.ndarray, d_b: int, d_c: int, position: int, b: int) -> np.ndarray:
    """
    op (x) rest on B (x) C_1 ... C_b with `op` acting on (B, C_position) and `rest` on
    the other slots in increasing order; position is 1-based.
    """
    if not 1 <= position <= b:
        raise DimensionError(f"Position {position} outside 1..{b}.")
    full = np.kron(op, rest)                       # axes: B, C_position, the other C's
    dims = [d_b] + [d_c] * b
    current = [0, position] + [i for i in range(1, b + 1) if i != position]
    perm = [current.index(axis) for axis in range(b + 1)]
    k = b + 1
    t = full.reshape(dims + dims).transpose(perm + [k + p for p in perm])
    return t.reshape(full.shape)


def embed_at(op: np.ndarray, d_b: int, d_c: int, position: int, b: int) -> np.ndarray:
    """Pi_BC on (B, C_position), identity on the other slots."""
    return place_at_slot(op, np.eye(d_c ** (b - 1), dtype=np.complex128), d_b, d_c, position, b)


def build_position_operators(pi_bc: np.ndarray, d_b: int, d_c: int, b: int) -> PositionOperators:
    """Pi_1..Pi_b, their sum and its support projector."""
    pi_bc = linalg.require_hermitian(pi_bc, "Pi_BC")
    if pi_bc.shape != (d_b * d_c, d_b * d_c):
        raise DimensionError(f"Pi_BC has shape {pi_bc.shape}, expected {(d_b * d_c,) * 2}.")
    values = linalg.eigvalsh(pi_bc)
    if values[0] < -DECODER_TOLERANCE or values[-1] > 1.0 + DECODER_TOLERANCE:
        raise ParameterError(f"Pi_BC must satisfy 0 <= Pi <= I; spectrum in [{values[0]:.3e}, {values[-1]:.6f}].")
    pi_list = [embed_at(pi_bc, d_b, d_c, j, b) for j in range(1, b + 1)]
    pi_sum = linalg.hermitize(sum(pi_list))
    return PositionOperators(pi_single=pi_bc, pi_list=pi_list, pi_sum=pi_sum,
                             pi_support=linalg.support_projector(pi_sum), d_b=d_b, d_c=d_c)


def measurement_elements(ops: PositionOperators) -> Sequence[np.ndarray]:
    """P_j^2 = Pi^{-1/2} Pi_j Pi^{-1/2} (inverse on the support of Pi)."""
    inv_sqrt = linalg.matrix_function(ops.pi_sum, MatrixFunction.INV_SQRT_ON_SUPPORT)
    return [linalg.hermitize(inv_sqrt @ pi_j @ inv_sqrt) for pi_j in ops.pi_list]


def decoder_isometry(ops: PositionOperators) -> np.ndarray:
    """
    V_B = sum_j sqrt(P_j^2) (x) |j> + sqrt(I - Pi^0) (x) |0>, as a (D (b+1)) x D matrix
    with the outcome register last.
    """
    dim = ops.pi_sum.shape[0]
    b = ops.b
    blocks = [np.eye(dim, dtype=np.complex128) - ops.pi_support]
    blocks += [linalg.matrix_function(e, MatrixFunction.SQRT) for e in measurement_elements(ops)]
    v = np.zeros((dim, b + 1, dim), dtype=np.complex128)
    for j, block in enumerate(blocks):
        v[:, j, :] = block
    v = v.reshape(dim * (b + 1), dim)

    residual = float(np.max(np.abs(v.conj().T @ v - np.eye(dim))))
    if residual > DECODER_TOLERANCE:
        raise NumericError(f"Decoder is not an isometry: max |V^H V - I| = {residual:.3e}.", witness=residual)
    logger.debug(f"Decoder isometry built for b={b}, dim={dim}: residual {residual:.3e}.")
    return v
