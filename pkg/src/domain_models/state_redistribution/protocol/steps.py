# src/domain_models/state_redistribution/protocol/steps.py

"""
Protocol steps as isometries on a labelled global vector.

Every step knows its own adjoint so a recorded run can be replayed backwards.
The working vector carries no norm contract: adjoint replay produces
subnormalized vectors.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from shared_libs.quantum import linalg
from shared_libs.quantum.states import (
    PureVector,
    QuantumState,
    RegisterLayout,
    apply_layout,
    apply_operator_raw,
    controlled_swap_raw,
)
from shared_libs.utils.exceptions import DimensionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RegisterVector:
    """Amplitudes on a register layout, not necessarily normalized."""
    layout: RegisterLayout
    amplitudes: np.ndarray

    @classmethod
    def from_pure(cls, pure: PureVector) -> "RegisterVector":
        return cls(layout=pure.layout, amplitudes=np.array(pure.amplitudes))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def as_tensor(self) -> np.ndarray:
        return np.asarray(self.amplitudes).reshape(self.layout.dims)

    def to_pure(self) -> PureVector:
        return PureVector(layout=self.layout, amplitudes=self.amplitudes / self.norm)

    def marginal_matrix(self, labels: Sequence[str]) -> np.ndarray:
        """Unnormalized reduced operator on `labels` (in that order)."""
        keep = self.layout.indices(labels)
        rest = [i for i in range(len(self.layout.registers)) if i not in keep]
        kept_dim = self.layout.select(labels).total_dim
        mat = self.as_tensor().transpose(keep + rest).reshape(kept_dim, -1)
        return linalg.hermitize(mat @ mat.conj().T)

    def marginal(self, labels: Sequence[str]) -> QuantumState:
        m = self.marginal_matrix(labels)
        return QuantumState(layout=self.layout.select(labels), matrix=m / np.real(np.trace(m)))

    def contract(self, labels: Sequence[str], bra: np.ndarray) -> "RegisterVector":
        """(<bra| (x) I) applied on `labels`; `bra` is given as a ket on those registers."""
        keep = self.layout.indices(labels)
        rest = [i for i in range(len(self.layout.registers)) if i not in keep]
        sub_dim = self.layout.select(labels).total_dim
        mat = self.as_tensor().transpose(keep + rest).reshape(sub_dim, -1)
        rest_layout = self.layout.without(labels)
        return RegisterVector(layout=rest_layout, amplitudes=np.asarray(bra).conj().reshape(-1) @ mat)

    def aligned(self, order: Sequence[str]) -> np.ndarray:
        return self.as_tensor().transpose(self.layout.indices(order)).reshape(-1)


# --- 1. CONTRACT ---

class IsometryStep(ABC):
    """One step of the protocol: an isometry between register layouts."""

    def __init__(self, name: str):
        self.name = name

    @abstractmethod
    def apply(self, vec: RegisterVector) -> RegisterVector:
        pass

    @abstractmethod
    def adjoint(self, vec: RegisterVector) -> RegisterVector:
        pass

    @property
    def isometry_residual(self) -> float:
        return 0.0

    def describe(self) -> Dict[str, object]:
        return {}


# --- 2. IMPLEMENTATIONS ---

class AppendState(IsometryStep):
    """Tensors a fixed pure state onto the end of the layout."""

    def __init__(self, name: str, state: RegisterVector):
        super().__init__(name)
        self.state = state

    def apply(self, vec: RegisterVector) -> RegisterVector:
        clash = set(vec.layout.labels) & set(self.state.layout.labels)
        if clash:
            raise DimensionError(f"Step '{self.name}': registers {sorted(clash)} already present.")
        return RegisterVector(layout=vec.layout.concat(self.state.layout),
                              amplitudes=np.kron(vec.amplitudes, self.state.amplitudes))

    def adjoint(self, vec: RegisterVector) -> RegisterVector:
        return vec.contract(self.state.layout.labels, self.state.amplitudes)

    def describe(self) -> Dict[str, object]:
        return {"appended": self.state.layout.labels}


class LocalIsometry(IsometryStep):
    """Matrix acting on a subset of registers (output replaces them in place)."""

    def __init__(self, name: str, matrix: np.ndarray, input_layout: RegisterLayout,
                 output_layout: RegisterLayout, residual: Optional[float] = None):
        super().__init__(name)
        self.matrix = np.asarray(matrix, dtype=np.complex128)
        self.input_layout = input_layout
        self.output_layout = output_layout
        if residual is None:
            gram = self.matrix.conj().T @ self.matrix
            residual = float(np.max(np.abs(gram - np.eye(gram.shape[0])))) if gram.size else 0.0
        self._residual = residual

    @property
    def isometry_residual(self) -> float:
        return self._residual

    def apply(self, vec: RegisterVector) -> RegisterVector:
        labels = self.input_layout.labels
        amps = apply_operator_raw(vec.layout, vec.amplitudes, self.matrix, labels, self.output_layout)
        return RegisterVector(layout=apply_layout(vec.layout, labels, self.output_layout), amplitudes=amps)

    def adjoint(self, vec: RegisterVector) -> RegisterVector:
        labels = self.output_layout.labels
        amps = apply_operator_raw(vec.layout, vec.amplitudes, self.matrix.conj().T, labels, self.input_layout)
        return RegisterVector(layout=apply_layout(vec.layout, labels, self.input_layout), amplitudes=amps)

    def describe(self) -> Dict[str, object]:
        return {"inputs": self.input_layout.labels, "outputs": self.output_layout.labels}


class ControlledSwap(IsometryStep):
    """Branch-wise register swaps; a permutation, hence its own adjoint."""

    def __init__(self, name: str, control: str, pairs: Mapping[int, Sequence[Tuple[str, str]]]):
        super().__init__(name)
        self.control = control
        self.pairs = {int(k): list(v) for k, v in pairs.items() if v}

    def apply(self, vec: RegisterVector) -> RegisterVector:
        return RegisterVector(layout=vec.layout,
                              amplitudes=controlled_swap_raw(vec.layout, vec.amplitudes, self.control, self.pairs))

    def adjoint(self, vec: RegisterVector) -> RegisterVector:
        return self.apply(vec)

    def describe(self) -> Dict[str, object]:
        return {"control": self.control, "branches": len(self.pairs)}


class RegisterTransfer(IsometryStep):
    """Moves a register from one party to the other; the amplitudes are untouched."""

    def __init__(self, name: str, register: str, qubits: float):
        super().__init__(name)
        self.register = register
        self.qubits = qubits

    def apply(self, vec: RegisterVector) -> RegisterVector:
        vec.layout.index(self.register)
        return vec

    def adjoint(self, vec: RegisterVector) -> RegisterVector:
        return vec

    def describe(self) -> Dict[str, object]:
        return {"register": self.register, "qubits": self.qubits}


def replay_adjoint(steps: List[IsometryStep], vec: RegisterVector) -> RegisterVector:
    """Applies the adjoints of `steps` in reverse order."""
    for step in reversed(steps):
        vec = step.adjoint(vec)
        logger.debug(f"Adjoint of '{step.name}': norm {vec.norm:.12f}.")
    return vec
