# src/shared_libs/quantum/states.py

"""
Quantum states with register bookkeeping.

`QuantumState` (density operator) and `PureVector` (unit vector) both carry a
`RegisterLayout`; operations address registers by label, never by position.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Literal, Mapping, NamedTuple, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

from shared_libs.quantum import linalg
from shared_libs.utils.exceptions import (
    ContractViolationError,
    DimensionError,
    NotPSDError,
)

logger = logging.getLogger(__name__)

STATE_TOLERANCE = 1e-10
PURITY_TOLERANCE = 1e-9


# --- 1. REGISTER LAYOUT ---

class Register(BaseModel):
    model_config = ConfigDict(frozen=True)

    label: str = Field(..., min_length=1)
    dim: PositiveInt


class RegisterLayout(BaseModel):
    """Ordered registers; the first register is the most significant tensor factor."""
    model_config = ConfigDict(frozen=True)

    registers: Tuple[Register, ...] = Field(default_factory=tuple)

    @model_validator(mode="after")
    def _labels_unique(self):
        labels = [r.label for r in self.registers]
        if len(set(labels)) != len(labels):
            raise ValueError(f"Register labels must be unique, got {labels}.")
        return self

    @classmethod
    def of(cls, *pairs: Tuple[str, int]) -> "RegisterLayout":
        """RegisterLayout.of(("A", 2), ("B", 3))"""
        return cls(registers=tuple(Register(label=l, dim=d) for l, d in pairs))

    @property
    def labels(self) -> List[str]:
        return [r.label for r in self.registers]

    @property
    def dims(self) -> List[int]:
        return [r.dim for r in self.registers]

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims)) if self.registers else 1

    def dim_of(self, label: str) -> int:
        return self.registers[self.index(label)].dim

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DimensionError(f"Register '{label}' not in layout {self.labels}.") from None

    def indices(self, labels: Iterable[str]) -> List[int]:
        return [self.index(l) for l in labels]

    def select(self, labels: Sequence[str]) -> "RegisterLayout":
        return RegisterLayout(registers=tuple(self.registers[i] for i in self.indices(labels)))

    def without(self, labels: Iterable[str]) -> "RegisterLayout":
        drop = set(labels)
        return RegisterLayout(registers=tuple(r for r in self.registers if r.label not in drop))

    def concat(self, other: "RegisterLayout") -> "RegisterLayout":
        return RegisterLayout(registers=self.registers + other.registers)

    def relabel(self, mapping: Mapping[str, str]) -> "RegisterLayout":
        return RegisterLayout(registers=tuple(
            Register(label=mapping.get(r.label, r.label), dim=r.dim) for r in self.registers
        ))


def _check_dim(layout: RegisterLayout, size: int, what: str) -> None:
    if layout.total_dim != size:
        raise DimensionError(f"Layout {layout.labels} (dim {layout.total_dim}) does not match {what} size {size}.")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


# --- 2. STATES ---

@dataclass(frozen=True)
class QuantumState:
    """Density operator on `layout`; validated on construction."""
    layout: RegisterLayout
    matrix: np.ndarray
    purity_flag: bool = field(init=False)

    def __post_init__(self):
        matrix = linalg.as_matrix(self.matrix)
        _check_dim(self.layout, matrix.shape[0], "density matrix")
        linalg.require_hermitian(matrix, "density matrix")
        trace = float(np.real(np.trace(matrix)))
        if abs(trace - 1.0) > STATE_TOLERANCE:
            raise ContractViolationError(f"Density matrix trace {trace:.12g} differs from 1.")
        min_eig = float(linalg.eigvalsh(matrix)[0])
        if min_eig < -STATE_TOLERANCE:
            raise NotPSDError(f"Density matrix has eigenvalue {min_eig:.3e}.", min_eigenvalue=min_eig)
        purity = float(np.real(np.vdot(matrix, matrix)))
        object.__setattr__(self, "matrix", _frozen(matrix))
        object.__setattr__(self, "purity_flag", purity >= 1.0 - PURITY_TOLERANCE)

    @classmethod
    def from_matrix(cls, matrix, *pairs: Tuple[str, int]) -> "QuantumState":
        return cls(layout=RegisterLayout.of(*pairs), matrix=matrix)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def marginal(self, labels: Sequence[str]) -> "QuantumState":
        keep = self.layout.indices(labels)
        reduced = linalg.partial_trace(self.matrix, self.layout.dims, keep)
        return QuantumState(layout=self.layout.select(labels), matrix=linalg.hermitize(reduced))

    def tensor(self, other: "QuantumState") -> "QuantumState":
        return QuantumState(layout=self.layout.concat(other.layout),
                            matrix=linalg.tensor(self.matrix, other.matrix))

    def relabel(self, mapping: Mapping[str, str]) -> "QuantumState":
        return QuantumState(layout=self.layout.relabel(mapping), matrix=self.matrix)


@dataclass(frozen=True)
class PureVector:
    """Unit vector on `layout`."""
    layout: RegisterLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        _check_dim(self.layout, amps.size, "amplitude vector")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > STATE_TOLERANCE:
            raise ContractViolationError(f"Pure vector norm {norm:.12g} differs from 1.")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.layout.dims)

    def density(self) -> QuantumState:
        return QuantumState(layout=self.layout, matrix=linalg.projector(self.amplitudes))

    def marginal(self, labels: Sequence[str]) -> QuantumState:
        """Reduced density operator on `labels` computed directly from the amplitudes."""
        keep = self.layout.indices(labels)
        rest = [i for i in range(len(self.layout.registers)) if i not in keep]
        kept_layout = self.layout.select(labels)
        mat = self.as_tensor().transpose(keep + rest).reshape(kept_layout.total_dim, -1)
        return QuantumState(layout=kept_layout, matrix=linalg.hermitize(mat @ mat.conj().T))

    def tensor(self, other: "PureVector") -> "PureVector":
        return PureVector(layout=self.layout.concat(other.layout),
                          amplitudes=np.kron(self.amplitudes, other.amplitudes))

    def relabel(self, mapping: Mapping[str, str]) -> "PureVector":
        return PureVector(layout=self.layout.relabel(mapping), amplitudes=self.amplitudes)

    def overlap(self, other: "PureVector") -> complex:
        """<self|other> after aligning `other` to this layout."""
        aligned = permute_registers(other, self.layout.labels)
        return complex(np.vdot(self.amplitudes, aligned.amplitudes))


AnyState = Union[QuantumState, PureVector]


# --- 3. CONSTRUCTORS ---

def basis_state(layout: RegisterLayout, index: int) -> PureVector:
    amps = np.zeros(layout.total_dim, dtype=np.complex128)
    amps[index] = 1.0
    return PureVector(layout=layout, amplitudes=amps)


def maximally_entangled(d: int, labels: Tuple[str, str] = ("A", "B")) -> PureVector:
    """sum_i |i>|i> / sqrt(d)."""
    amps = np.eye(d, dtype=np.complex128).reshape(-1) / np.sqrt(d)
    return PureVector(layout=RegisterLayout.of((labels[0], d), (labels[1], d)), amplitudes=amps)


def bell_pair(labels: Tuple[str, str] = ("A", "B")) -> PureVector:
    return maximally_entangled(2, labels)


def maximally_mixed(layout: RegisterLayout) -> QuantumState:
    d = layout.total_dim
    return QuantumState(layout=layout, matrix=linalg.identity(d) / d)


def trivial_register(label: str) -> PureVector:
    return PureVector(layout=RegisterLayout.of((label, 1)), amplitudes=np.ones(1))


def product(*parts: AnyState) -> AnyState:
    result = parts[0]
    for part in parts[1:]:
        result = result.tensor(part)
    return result


def random_pure_vector(layout: RegisterLayout, seed: int) -> PureVector:
    """Normalized standard complex Gaussian vector (Haar distributed)."""
    rng = np.random.default_rng(seed)
    d = layout.total_dim
    g = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureVector(layout=layout, amplitudes=g / np.linalg.norm(g))


def random_state(layout: RegisterLayout, kind: Literal["pure_haar", "mixed_ginibre"], seed: int) -> QuantumState:
    """Seeded random density operator; bit-identical for equal seeds."""
    if kind == "pure_haar":
        return random_pure_vector(layout, seed).density()
    if kind != "mixed_ginibre":
        raise ContractViolationError(f"Unknown random state kind '{kind}'.")
    rng = np.random.default_rng(seed)
    d = layout.total_dim
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    gg = g @ g.conj().T
    return QuantumState(layout=layout, matrix=linalg.hermitize(gg / np.real(np.trace(gg))))


# --- 4. PURIFICATION & UHLMANN ---

def purify(rho: QuantumState, ancilla_label: str = "P") -> PureVector:
    """
    Canonical purification sum_i sqrt(lambda_i) |v_i>|i>, eigenvalues ascending on the
    support; the ancilla has dimension rank(rho) and is appended last.
    """
    values, vectors = linalg.support_basis(rho.matrix)
    r = values.size
    amps = (vectors * np.sqrt(values)).reshape(-1)
    layout = rho.layout.concat(RegisterLayout.of((ancilla_label, r)))
    amps = amps / np.linalg.norm(amps)
    return PureVector(layout=layout, amplitudes=amps)


class UhlmannIsometry(NamedTuple):
    matrix: np.ndarray          # dim(Z) x dim(Y)
    overlap: float
    input_layout: RegisterLayout
    output_layout: RegisterLayout
    support_rank: int
    full_isometry: bool


def uhlmann_isometry(a: PureVector, b: PureVector, shared: Sequence[str]) -> UhlmannIsometry:
    """
    Isometry V: Y -> Z maximizing |<b|(I_X (x) V)|a>| for a on X(x)Y and b on X(x)Z.

    X is given by `shared`; Y and Z are the remaining registers of a and b in their
    own order. When dim(Z) < dim(Y) the map is built on supp(a_Y) only and is
    isometric there.
    """
    shared = list(shared)
    x_a, x_b = a.layout.select(shared), b.layout.select(shared)
    if x_a.dims != x_b.dims:
        raise DimensionError(f"Shared registers differ in dimension: {x_a.dims} vs {x_b.dims}.")
    y_layout = a.layout.without(shared)
    z_layout = b.layout.without(shared)
    dx, dy, dz = x_a.total_dim, y_layout.total_dim, z_layout.total_dim

    a_mat = permute_registers(a, shared + y_layout.labels).amplitudes.reshape(dx, dy)
    b_mat = permute_registers(b, shared + z_layout.labels).amplitudes.reshape(dx, dz)

    if dz >= dy:
        q = np.eye(dy, dtype=np.complex128)
        full = True
    else:
        # supp(a_Y): (a_Y)_{y,y'} = sum_x a_{xy} conj(a_{xy'})
        a_y = linalg.hermitize(a_mat.T @ a_mat.conj())
        _, q = linalg.support_basis(a_y)
        if q.shape[1] > dz:
            raise DimensionError(
                f"Output space dim {dz} is smaller than rank {q.shape[1]} of the input marginal.",
                required=q.shape[1], cap=dz,
            )
        full = False
    a_s = a_mat @ q.conj()
    cross = b_mat.conj().T @ a_s                       # N_{z,k}
    u, s, vh = np.linalg.svd(cross, full_matrices=False)
    v_s = u.conj() @ vh.conj()                         # conj(U) W^T
    matrix = v_s @ q.conj().T
    overlap = float(np.sum(s))
    logger.debug(f"Uhlmann isometry {y_layout.labels} -> {z_layout.labels}: overlap {overlap:.12f}.")
    return UhlmannIsometry(matrix=matrix, overlap=min(overlap, 1.0), input_layout=y_layout,
                           output_layout=z_layout, support_rank=q.shape[1], full_isometry=full)


# --- 5. REGISTER OPERATIONS ---

def permute_registers(state: AnyState, order: Sequence[str]) -> AnyState:
    """Reorders registers to `order` (a permutation of the layout labels)."""
    order = list(order)
    if sorted(order) != sorted(state.layout.labels):
        raise DimensionError(f"Order {order} is not a permutation of {state.layout.labels}.")
    if order == state.layout.labels:
        return state
    perm = state.layout.indices(order)
    new_layout = state.layout.select(order)
    if isinstance(state, PureVector):
        amps = state.as_tensor().transpose(perm).reshape(-1)
        return PureVector(layout=new_layout, amplitudes=amps)
    n = len(perm)
    dims = state.layout.dims
    t = state.matrix.reshape(dims + dims).transpose(perm + [n + p for p in perm])
    return QuantumState(layout=new_layout, matrix=t.reshape(new_layout.total_dim, -1))


def swap_registers(pure: PureVector, pairs: Sequence[Tuple[str, str]]) -> PureVector:
    """Exchanges the contents of equally sized register pairs; labels stay in place."""
    t = np.array(pure.as_tensor())
    axes = list(range(t.ndim))
    for left, right in pairs:
        i, j = pure.layout.index(left), pure.layout.index(right)
        if pure.layout.dims[i] != pure.layout.dims[j]:
            raise DimensionError(f"Cannot swap '{left}' (dim {pure.layout.dims[i]}) with '{right}' (dim {pure.layout.dims[j]}).")
        axes[i], axes[j] = axes[j], axes[i]
    return PureVector(layout=pure.layout, amplitudes=t.transpose(axes).reshape(-1))


def controlled_swap(pure: PureVector, control_label: str,
                    target_pairs: Mapping[int, Sequence[Tuple[str, str]]]) -> PureVector:
    """
    For each basis value c of the control register, swaps the register pairs
    `target_pairs[c]` on that branch (values absent from the map are left alone).
    Superpositions over the control are handled by linearity.
    """
    return PureVector(layout=pure.layout,
                      amplitudes=controlled_swap_raw(pure.layout, pure.amplitudes, control_label, target_pairs))


def controlled_swap_raw(layout: RegisterLayout, amplitudes: np.ndarray, control_label: str,
                        target_pairs: Mapping[int, Sequence[Tuple[str, str]]]) -> np.ndarray:
    c_axis = layout.index(control_label)
    t = np.array(np.asarray(amplitudes).reshape(layout.dims))
    moved = np.moveaxis(t, c_axis, 0)
    rest_labels = [l for l in layout.labels if l != control_label]
    rest_layout = layout.select(rest_labels)
    for value, pairs in target_pairs.items():
        if not pairs:
            continue
        if not 0 <= value < moved.shape[0]:
            raise DimensionError(f"Control value {value} outside register '{control_label}'.")
        axes = list(range(moved.ndim - 1))
        for left, right in pairs:
            i, j = rest_layout.index(left), rest_layout.index(right)
            if rest_layout.dims[i] != rest_layout.dims[j]:
                raise DimensionError(f"Cannot swap '{left}' with '{right}': dims differ.")
            axes[i], axes[j] = axes[j], axes[i]
        moved[value] = moved[value].transpose(axes).copy()
    return np.moveaxis(moved, 0, c_axis).reshape(-1)


def apply_operator(pure: PureVector, matrix: np.ndarray, input_labels: Sequence[str],
                   output_layout: RegisterLayout) -> PureVector:
    """
    Applies `matrix` (dim(out) x dim(in)) to the registers `input_labels`; the output
    registers replace them at the position of the first input register.
    """
    return PureVector(layout=apply_layout(pure.layout, input_labels, output_layout),
                      amplitudes=apply_operator_raw(pure.layout, pure.amplitudes, matrix, input_labels, output_layout))


def apply_operator_raw(layout: RegisterLayout, amplitudes: np.ndarray, matrix: np.ndarray,
                       input_labels: Sequence[str], output_layout: RegisterLayout) -> np.ndarray:
    """Same as apply_operator but without the unit-norm contract (for adjoint replay)."""
    input_labels = list(input_labels)
    in_layout = layout.select(input_labels)
    if matrix.shape != (output_layout.total_dim, in_layout.total_dim):
        raise DimensionError(
            f"Operator shape {matrix.shape} does not map {in_layout.labels} -> {output_layout.labels}."
        )
    in_idx = layout.indices(input_labels)
    rest_idx = [i for i in range(len(layout.registers)) if i not in in_idx]
    t = np.asarray(amplitudes).reshape(layout.dims).transpose(in_idx + rest_idx)
    t = t.reshape(in_layout.total_dim, -1)
    out = (matrix @ t).reshape(output_layout.dims + [layout.dims[i] for i in rest_idx])

    new_layout = apply_layout(layout, input_labels, output_layout)
    current = output_layout.labels + [layout.labels[i] for i in rest_idx]
    perm = [current.index(l) for l in new_layout.labels]
    return out.transpose(perm).reshape(-1)


def apply_layout(layout: RegisterLayout, input_labels: Sequence[str], output_layout: RegisterLayout) -> RegisterLayout:
    first = min(layout.indices(input_labels))
    before = [r for i, r in enumerate(layout.registers) if i < first and r.label not in input_labels]
    after = [r for i, r in enumerate(layout.registers) if i > first and r.label not in input_labels]
    return RegisterLayout(registers=tuple(before) + output_layout.registers + tuple(after))
