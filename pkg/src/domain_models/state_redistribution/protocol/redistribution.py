# src/domain_models/state_redistribution/protocol/redistribution.py

"""
One-shot quantum state redistribution, simulated on the global pure vector.

Register roles: R (reference), A (Alice), B (Bob), C (the register Alice hands
over). Alice holds L1..Ln, Bob holds C1..Cn; |sigma>_{L_i C_i} purifies the
reference state sigma_C. Step by step:

  1. append theta = |sigma>^{(x)n};
  2. Alice's Uhlmann isometry A C L^n -> J A L^n towards the position mixture mu;
  3. split J into block J1 and in-block position J2;
  4. send J1 (1/2 log2 floor(n/b) qubits with superdense coding);
  5. both sides move block J1 to the first b slots;
  6. Bob's coherent position decoder on B C1..Cb, then a swap of C_{j2} into C1;
  7. compare R A B C1 with the input.

The reversed protocol runs the same simulation with A and B exchanged and then
replays the step adjoints from the ideal output.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from domain_models.state_redistribution.protocol.position_decoding import (
    block_count,
    build_position_operators,
    decoder_isometry,
    index_split_matrix,
    measurement_elements,
    place_at_slot,
)
from domain_models.state_redistribution.protocol.steps import (
    AppendState,
    ControlledSwap,
    IsometryStep,
    LocalIsometry,
    RegisterTransfer,
    RegisterVector,
    replay_adjoint,
)
from domain_models.state_redistribution.schemas import (
    CheckReport,
    CostTrendPoint,
    DecodingAnalysis,
    PositionOperators,
    ProtocolConfig,
    ProtocolTranscript,
    StepRecord,
)
from shared_libs.configs.config_loader import get_settings
from shared_libs.quantum import linalg
from shared_libs.quantum.entropies import (
    EntropyResult,
    cond_mutual_information,
    dh_eps,
    dmax,
    smooth_dmax,
    smooth_split_dmax,
    support_contained,
)
from shared_libs.quantum.states import (
    PureVector,
    QuantumState,
    RegisterLayout,
    permute_registers,
    purify,
    trivial_register,
    uhlmann_isometry,
)
from shared_libs.utils.exceptions import (
    DimensionError,
    NumericError,
    ParameterError,
    SupportViolationError,
)
from shared_libs.utils.logging_utils import log_event

logger = logging.getLogger(__name__)

ROLES = ("R", "A", "B", "C")
OUTPUT_REGISTERS = ["R", "A", "B", "C1"]
GUARANTEE_SLACK = 1e-6
FORMULA_GUARD = 1e-9
EPS_NOTE = "D_H uses type-one error eps2**2 as in the cost expression; the decoding proof states eps2."
J1_NOTE = "J1 has dimension floor((n-1)/b)+1; when b does not divide n the last block swaps only existing slots."


# --- 1. INPUT PREPARATION ---

def canonical_input(phi: PureVector, partition: Sequence[str] = ROLES) -> PureVector:
    """Reorders `phi` to the roles R, A, B, C named by `partition` (missing roles become trivial)."""
    partition = list(partition)
    if len(partition) != 4 or len(set(partition)) != 4:
        raise ParameterError(f"Partition must name four distinct registers (R,A,B,C), got {partition}.")
    extra = [label for label in phi.layout.labels if label not in partition]
    if extra:
        raise ParameterError(f"Registers {extra} are not assigned a role by partition {partition}.")
    for label in partition:
        if label not in phi.layout.labels:
            phi = phi.tensor(trivial_register(label))
    phi = permute_registers(phi, partition)
    return phi.relabel(dict(zip(partition, ROLES)))


def reversed_partition(partition: Sequence[str] = ROLES) -> List[str]:
    partition = list(partition)
    return [partition[0], partition[2], partition[1], partition[3]]


def kron_power(m: np.ndarray, n: int) -> np.ndarray:
    return reduce(np.kron, [m] * n)


def c_names(m: int) -> List[str]:
    return [f"C{i}" for i in range(1, m + 1)]


def l_names(m: int) -> List[str]:
    return [f"L{i}" for i in range(1, m + 1)]


@dataclass
class _Setup:
    """Quantities shared by every stage of one run."""
    phi: PureVector
    dims: Dict[str, int]
    sigma: np.ndarray
    purification: np.ndarray          # amplitudes s[c, l] of |sigma>_{CL}
    k: float
    dh: EntropyResult
    eps1: float
    eps2: float
    n: int = 0
    b: int = 0

    @property
    def d_l(self) -> int:
        return self.purification.shape[1]

    @property
    def type_two_error(self) -> float:
        return 2.0 ** (-self.dh.value)


def resolve_block_parameters(k: float, dh_value: float, config: ProtocolConfig) -> Tuple[int, int]:
    """(n, b) as given, or n = ceil(2^k / eps1^2) and b = ceil(eps2^2 2^D_H)."""
    if not config.derive_sizes:
        return int(config.n), int(config.b)
    n = max(1, math.ceil(2.0 ** k / config.eps1 ** 2 - FORMULA_GUARD))
    b = max(1, math.ceil(config.eps2 ** 2 * 2.0 ** dh_value - FORMULA_GUARD))
    if b > n:
        raise ParameterError(f"Derived block size b={b} exceeds derived n={n}.")
    return n, b


def _prepare(phi: PureVector, config: ProtocolConfig, partition: Sequence[str]) -> _Setup:
    phi = canonical_input(phi, partition)
    dims = dict(zip(ROLES, phi.layout.dims))
    d_c = dims["C"]
    phi_c = phi.marginal(["C"]).matrix
    if config.sigma_C is None:
        sigma = np.array(phi_c)
    else:
        sigma = linalg.as_matrix(config.sigma_C.matrix)
        if sigma.shape != (d_c, d_c):
            raise DimensionError(f"sigma_C has shape {sigma.shape}, but C has dimension {d_c}.")
    if not support_contained(phi_c, sigma):
        raise SupportViolationError("supp(Phi_C) is not contained in supp(sigma_C); k would be infinite.")

    k_result = dmax(phi.marginal(["R", "B", "C"]), np.kron(phi.marginal(["R", "B"]).matrix, sigma))
    if k_result.infinite:
        raise SupportViolationError("D_max(Phi_RBC || Phi_RB (x) sigma_C) is infinite.")
    dh = dh_eps(phi.marginal(["B", "C"]), np.kron(phi.marginal(["B"]).matrix, sigma), config.eps2 ** 2)
    if dh.infinite:
        raise NumericError("The position test has zero type-two error; the decoder is undefined.", witness=0.0)

    reference = QuantumState(layout=RegisterLayout.of(("C", d_c)), matrix=sigma)
    s = np.asarray(purify(reference, "L").amplitudes).reshape(d_c, -1)
    setup = _Setup(phi=phi, dims=dims, sigma=sigma, purification=s, k=k_result.bits,
                   dh=dh, eps1=config.eps1, eps2=config.eps2)
    setup.n, setup.b = resolve_block_parameters(setup.k, dh.value, config)
    return setup


def global_dimension(setup: _Setup, n: int) -> int:
    d = setup.dims
    return d["R"] * d["A"] * d["B"] * d["C"] * (setup.d_l * d["C"]) ** n


def _check_cap(setup: _Setup, n: int) -> None:
    cap = get_settings().protocol.dim_cap
    total = global_dimension(setup, n)
    if total > cap:
        raise DimensionError(
            f"n={n} copies need a global vector of dimension {total} > cap {cap} "
            f"(lower n or raise QSRLAB_DIM_CAP).", required=total, cap=cap,
        )


# --- 2. STATES OF THE CONSTRUCTION ---

def reference_copies(s: np.ndarray, n: int) -> RegisterVector:
    """theta = |sigma>^{(x)n} on L1..Ln, C1..Cn."""
    d_c, d_l = s.shape
    t = reduce(np.multiply.outer, [s.T] * n)                 # axes L1, C1, L2, C2, ...
    perm = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
    layout = RegisterLayout.of(*[(l, d_l) for l in l_names(n)], *[(c, d_c) for c in c_names(n)])
    return RegisterVector(layout=layout, amplitudes=t.transpose(perm).reshape(-1))


def position_mixture(phi: PureVector, s: np.ndarray, m: int, index_label: str = "J") -> RegisterVector:
    """
    (1/sqrt m) sum_j |j> |Phi>_{R A B C_j} (x)_{i != j} |sigma>_{L_i C_i} (x) |0>_{L_j}

    on R, B, C1..Cm, <index_label>, A, L1..Lm (index value j stored at j - 1).
    """
    phi_t = phi.as_tensor()
    d_r, d_a, d_b, d_c = phi_t.shape
    d_l = s.shape[1]
    e0 = np.zeros(d_l, dtype=np.complex128)
    e0[0] = 1.0
    target = ["R", "B"] + c_names(m) + ["A"] + l_names(m)
    terms = []
    for j in range(1, m + 1):
        factors, labels = [phi_t], ["R", "A", "B", f"C{j}"]
        for i in range(1, m + 1):
            if i != j:
                factors.append(s)
                labels += [f"C{i}", f"L{i}"]
        factors.append(e0)
        labels.append(f"L{j}")
        t = reduce(np.multiply.outer, factors)
        terms.append(t.transpose([labels.index(l) for l in target]))
    mixture = np.moveaxis(np.stack(terms) / np.sqrt(m), 0, 2 + m)
    layout = RegisterLayout.of(
        ("R", d_r), ("B", d_b), *[(c, d_c) for c in c_names(m)],
        (index_label, m), ("A", d_a), *[(l, d_l) for l in l_names(m)],
    )
    return RegisterVector(layout=layout, amplitudes=mixture.reshape(-1))


def _decoder(setup: _Setup, b: int) -> Tuple[PositionOperators, np.ndarray]:
    ops = build_position_operators(setup.dh.certificate, setup.dims["B"], setup.dims["C"], b)
    return ops, decoder_isometry(ops)


# --- 3. STEPS ---

def alice_uhlmann_step(xi: RegisterVector, mu: RegisterVector, n: int) -> Tuple[LocalIsometry, float]:
    """Isometry A C L^n -> J A L^n taking xi as close as possible to mu; returns it with the overlap."""
    shared = ["R", "B"] + c_names(n)
    u = uhlmann_isometry(PureVector(layout=xi.layout, amplitudes=xi.amplitudes),
                         PureVector(layout=mu.layout, amplitudes=mu.amplitudes), shared)
    gram = u.matrix.conj().T @ u.matrix
    if u.full_isometry:
        residual = float(np.max(np.abs(gram - np.eye(gram.shape[0]))))
    else:
        # isometric on supp(xi_Y) only: gram is the projector onto it
        residual = float(np.max(np.abs(gram @ gram - gram)))
    step = LocalIsometry("alice_uhlmann", u.matrix, u.input_layout, u.output_layout, residual=residual)
    return step, u.overlap


def decoding_steps(setup: _Setup, n: int, b: int, v_b: np.ndarray) -> List[IsometryStep]:
    """Steps 3 to 6 (index split, transfer, block swap, decoder, decoder swap)."""
    d_b, d_c = setup.dims["B"], setup.dims["C"]
    m1 = block_count(n, b)
    steps: List[IsometryStep] = [
        LocalIsometry("index_split", index_split_matrix(n, b),
                      RegisterLayout.of(("J", n)), RegisterLayout.of(("J1", m1), ("J2", b))),
        RegisterTransfer("transfer_j1", "J1", qubits=0.5 * math.log2(n // b)),
    ]
    block_pairs = {}
    for j1 in range(1, m1):
        branch = []
        for i in range(1, b + 1):
            src = b * j1 + i
            if src <= n:
                branch += [(f"C{src}", f"C{i}"), (f"L{src}", f"L{i}")]
        block_pairs[j1] = branch
    steps.append(ControlledSwap("block_swap", "J1", block_pairs))

    bob_in = RegisterLayout.of(("B", d_b), *[(c, d_c) for c in c_names(b)])
    bob_out = bob_in.concat(RegisterLayout.of(("J2p", b + 1)))
    steps.append(LocalIsometry("bob_decoder", v_b, bob_in, bob_out))
    steps.append(ControlledSwap("decoder_swap", "J2p", {j2: [(f"C{j2}", "C1")] for j2 in range(2, b + 1)}))
    return steps


def _apply_steps(steps: Sequence[IsometryStep], vec: RegisterVector, records: List[StepRecord],
                 stored: Optional[Dict[str, np.ndarray]]) -> RegisterVector:
    tolerance = get_settings().protocol.isometry_tolerance
    for step in steps:
        vec = step.apply(vec)
        norm = vec.norm
        record = StepRecord(name=step.name, registers=vec.layout.labels, global_norm=norm,
                            norm_residual=abs(norm - 1.0), isometry_residual=step.isometry_residual,
                            details=step.describe())
        records.append(record)
        log_event(logger, f"Protocol step '{step.name}' applied.", "protocol_step",
                  {"norm_residual": record.norm_residual, "isometry_residual": record.isometry_residual})
        if record.norm_residual > tolerance:
            raise NumericError(f"Step '{step.name}' changed the global norm to {norm:.12f}.",
                               witness=record.norm_residual)
        if stored is not None:
            stored[step.name] = np.array(vec.amplitudes)
    return vec


def output_distance(vec: RegisterVector, phi: PureVector, labels: Sequence[str] = tuple(OUTPUT_REGISTERS)) -> float:
    """P(rho_labels, Phi); `vec` may be subnormalized (the missing weight counts as error)."""
    rho = vec.marginal_matrix(list(labels))
    amps = phi.amplitudes
    f2 = float(np.real(np.vdot(amps, rho @ amps)))
    return float(np.sqrt(min(1.0, max(0.0, 1.0 - f2))))


def decoder_statistics(vec: RegisterVector, b: int) -> Tuple[float, float]:
    """(probability that J2p equals the true position J2, probability of the 0 outcome)."""
    p = np.real(np.diag(vec.marginal_matrix(["J2", "J2p"]))).reshape(b, b + 1)
    success = float(sum(p[j - 1, j] for j in range(1, b + 1)))
    return success, float(np.sum(p[:, 0]))


# --- 4. BOUNDS ---

def hayashi_nagaoka_error(setup: _Setup, b: int) -> float:
    """2 Tr((I - Pi_1) rho^1) + 4 sum_{j != 1} Tr(Pi_j rho^1) = 2 eps2^2 + 4 (b-1) 2^-D_H."""
    type_one = 1.0 - float(setup.dh.solver_report.notes.get("type_one_success", 1.0 - setup.eps2 ** 2))
    return 2.0 * type_one + 4.0 * (b - 1) * setup.type_two_error


def derived_bound(setup: _Setup, n: int, b: int) -> float:
    """sqrt(min(1, 2^k/n)) + sqrt(1 - (1 - e)^2), e the decoding error estimate; capped at 1."""
    split_term = math.sqrt(min(1.0, 2.0 ** setup.k / n))
    e = min(1.0, hayashi_nagaoka_error(setup, b))
    return min(1.0, split_term + math.sqrt(max(0.0, 1.0 - (1.0 - e) ** 2)))


def _cost(setup: _Setup, k: float) -> float:
    return 0.5 * (k - setup.dh.value) + math.log2(1.0 / (setup.eps1 * setup.eps2))


# --- 5. PROTOCOL RUNS ---

@dataclass
class _Run:
    setup: _Setup
    transcript: ProtocolTranscript
    steps: List[IsometryStep] = field(default_factory=list)
    final: Optional[RegisterVector] = None


def _simulate(phi: PureVector, config: ProtocolConfig, partition: Sequence[str], side: str) -> _Run:
    setup = _prepare(phi, config, partition)
    n, b = setup.n, setup.b
    _check_cap(setup, n)
    logger.info(f"Simulating redistribution (side {side}): n={n}, b={b}, k={setup.k:.6f}, D_H={setup.dh.value:.6f}.")

    records: List[StepRecord] = []
    stored = {} if config.store_step_states else None
    start = RegisterVector.from_pure(setup.phi)

    append = AppendState("append_references", reference_copies(setup.purification, n))
    xi = _apply_steps([append], start, records, stored)
    mu = position_mixture(setup.phi, setup.purification, n)
    uhlmann, overlap = alice_uhlmann_step(xi, mu, n)
    vec = _apply_steps([uhlmann], xi, records, stored)

    _, v_b = _decoder(setup, b)
    tail = decoding_steps(setup, n, b, v_b)
    # statistics are read right after the decoder, before its swap
    vec = _apply_steps(tail[:-1], vec, records, stored)
    success, no_output = decoder_statistics(vec, b)
    vec = _apply_steps(tail[-1:], vec, records, stored)

    measured = output_distance(vec, setup.phi)
    formulas = config.derive_sizes
    transcript = ProtocolTranscript(
        side=side, k=setup.k, dh_value=setup.dh.value, dh_eps=config.eps2 ** 2, n=n, b=b,
        j1_dim=block_count(n, b), qubits_sent=0.5 * math.log2(n // b), measured_P=measured,
        guaranteed_P=(3 * config.eps1 + 6 * config.eps2) if formulas else None,
        derived_bound=derived_bound(setup, n, b),
        guarantee_regime="derived_sizes" if formulas else "trend_only",
        convex_split_fidelity=overlap, decode_success_prob=success, no_output_mass=no_output,
        cost_bound=_cost(setup, setup.k), step_records=records, step_states=stored,
        notes={"eps_convention": EPS_NOTE, "j1_dimension": J1_NOTE, "partition": list(partition)},
        seed=config.seed,
    )
    return _Run(setup=setup, transcript=transcript, steps=[append, uhlmann] + tail, final=vec)


def _enforce_guarantee(transcript: ProtocolTranscript) -> None:
    if transcript.guaranteed_P is not None and transcript.measured_P > transcript.guaranteed_P + GUARANTEE_SLACK:
        raise NumericError(
            f"Measured purified distance {transcript.measured_P:.9f} exceeds the guarantee "
            f"{transcript.guaranteed_P:.9f}.", witness=transcript.measured_P - transcript.guaranteed_P,
        )


def run_protocol(phi: PureVector, config: ProtocolConfig, partition: Sequence[str] = ROLES) -> ProtocolTranscript:
    """Simulates the protocol that sends C from Alice (A) to Bob (B)."""
    run = _simulate(phi, config, partition, side="B")
    _enforce_guarantee(run.transcript)
    logger.info(f"Protocol finished: measured P = {run.transcript.measured_P:.9f}, "
                f"qubits sent = {run.transcript.qubits_sent:.6f}.")
    return run.transcript


def run_protocol_reversed(phi: PureVector, config: ProtocolConfig, partition: Sequence[str] = ROLES) -> ProtocolTranscript:
    """
    Protocol with the A-side cost: simulate P' (A and B exchanged), then run it
    backwards from its ideal output Phi (x) omega by replaying the step adjoints.
    The appended reference copies are traced out, not projected.
    """
    run = _simulate(phi, config, reversed_partition(partition), side="A")
    final, phi_amps = run.final, run.setup.phi.amplitudes
    omega = final.contract(OUTPUT_REGISTERS, phi_amps)
    weight = omega.norm
    if weight <= 1e-12:
        raise NumericError("Forward output has no overlap with the input state; nothing to reverse.", witness=weight)
    out_layout = final.layout.select(OUTPUT_REGISTERS)
    ideal = RegisterVector(layout=out_layout.concat(omega.layout),
                           amplitudes=np.kron(phi_amps, omega.amplitudes / weight))
    restored = replay_adjoint(run.steps[1:], ideal)
    measured = output_distance(restored, run.setup.phi, ROLES)

    notes = dict(run.transcript.notes)
    notes.update({"forward_measured_P": run.transcript.measured_P, "reversal_weight": weight})
    transcript = run.transcript.model_copy(update={"measured_P": measured, "notes": notes})
    _enforce_guarantee(transcript)
    logger.info(f"Reversed protocol finished: measured P = {measured:.9f}.")
    return transcript


# --- 6. COSTS ---

def cost_bound(phi: PureVector, config: ProtocolConfig, side: str = "B",
               partition: Sequence[str] = ROLES, smoothed: bool = False) -> float:
    """
    1/2 (k - D_H) + log2(1/(eps1 eps2)) for the B side (or the A side of the reversed
    protocol). With `smoothed`, k is the feasible smoothed value at eps1.
    """
    if side not in ("A", "B"):
        raise ParameterError(f"side must be 'A' or 'B', got '{side}'.")
    parts = partition if side == "B" else reversed_partition(partition)
    setup = _prepare(phi, config.model_copy(update={"derive_sizes": False, "n": 1, "b": 1}), parts)
    k = setup.k
    if smoothed:
        k = smooth_split_dmax(setup.phi, ["R", "B"], ["C"], setup.sigma, config.eps1).bits
    return _cost(setup, k)


def achievable_cost(phi: PureVector, config: ProtocolConfig, partition: Sequence[str] = ROLES,
                    smoothed: bool = False) -> float:
    """Minimum of the two one-sided costs."""
    return min(cost_bound(phi, config, "B", partition, smoothed),
               cost_bound(phi, config, "A", partition, smoothed))


def asymptotic_cost_trend(phi: PureVector, n_max: int, eps: float = 0.1,
                          partition: Sequence[str] = ROLES) -> List[CostTrendPoint]:
    """
    Per-copy cost 1/2 (k_n - D_H,n) / n on n i.i.d. copies (sigma_C = Phi_C^{(x)n},
    k_n smoothed at eps against the fixed product reference, D_H at eps^2) next
    to the first-order rate 1/2 I(R:C|B).
    """
    if n_max < 1:
        raise ParameterError(f"n_max must be positive, got {n_max}.")
    canon = canonical_input(phi, partition)
    sigma = canon.marginal(["C"]).matrix
    rho_rbc = canon.marginal(["R", "B", "C"]).matrix
    ref_rbc = np.kron(canon.marginal(["R", "B"]).matrix, sigma)
    rho_bc = canon.marginal(["B", "C"]).matrix
    ref_bc = np.kron(canon.marginal(["B"]).matrix, sigma)
    reference = 0.5 * cond_mutual_information(canon, ["R"], ["C"], ["B"])
    cap = get_settings().verify.sweep_max_dim

    points = []
    for n in range(1, n_max + 1):
        if rho_rbc.shape[0] ** n > cap:
            logger.warning(f"Cost trend truncated at n={n - 1}: dimension {rho_rbc.shape[0] ** n} exceeds {cap}.")
            break
        k_n = smooth_dmax(kron_power(rho_rbc, n), kron_power(ref_rbc, n), eps).bits
        dh_n = dh_eps(kron_power(rho_bc, n), kron_power(ref_bc, n), eps ** 2).bits
        points.append(CostTrendPoint(n=n, k=k_n, dh_value=dh_n,
                                     per_copy_cost=0.5 * (k_n - dh_n) / n, reference=reference))
    return points


# --- 7. SUB-CHECKS ---

def exact_mixture_check(phi: PureVector, config: ProtocolConfig, partition: Sequence[str] = ROLES,
                 slack: float = GUARANTEE_SLACK) -> CheckReport:
    """
    Runs steps 3 to 7 on the exact position mixture mu (no Uhlmann step) with
    b = ceil(eps2^2 2^D_H); the output must be within 6 eps2 of the input.
    """
    setup = _prepare(phi, config.model_copy(update={"derive_sizes": False}), partition)
    b = max(1, math.ceil(config.eps2 ** 2 * 2.0 ** setup.dh.value - FORMULA_GUARD))
    n = max(int(config.n or 1), b)
    _check_cap(setup, n)
    _, v_b = _decoder(setup, b)
    vec = position_mixture(setup.phi, setup.purification, n)
    vec = _apply_steps(decoding_steps(setup, n, b, v_b), vec, [], None)
    distance = output_distance(vec, setup.phi)
    return CheckReport.scalar(
        "exact-mixture", distance, 6.0 * config.eps2, slack,
        details={"n": n, "b": b, "dh": setup.dh.value, "hayashi_nagaoka_error": hayashi_nagaoka_error(setup, b)},
        digest={"seed": config.seed, "dims": [setup.dims[r] for r in ROLES]},
    )


def decoding_analysis(phi: PureVector, config: ProtocolConfig, partition: Sequence[str] = ROLES,
                      b: Optional[int] = None) -> DecodingAnalysis:
    """
    Decoder fidelity on the ideal mixture mu'' over R B A J2 L1..Lb C1..Cb against
    the square-root measurement success and the Hayashi-Nagaoka estimates.
    """
    setup = _prepare(phi, config.model_copy(update={"derive_sizes": False}), partition)
    b = int(b or config.b or 1)
    ops, v_b = _decoder(setup, b)
    mu = position_mixture(setup.phi, setup.purification, b, index_label="J2")
    bob_in = RegisterLayout.of(("B", setup.dims["B"]), *[(c, setup.dims["C"]) for c in c_names(b)])
    decoder = LocalIsometry("bob_decoder", v_b, bob_in, bob_in.concat(RegisterLayout.of(("J2p", b + 1))))
    decoded = decoder.apply(mu)

    # ideal output: outcome register equal to the true position
    t = mu.as_tensor()
    j_axis = mu.layout.index("J2")
    ideal = np.zeros(t.shape + (b + 1,), dtype=np.complex128)
    for j in range(1, b + 1):
        index = [slice(None)] * t.ndim + [j]
        index[j_axis] = j - 1
        src = [slice(None)] * t.ndim
        src[j_axis] = j - 1
        ideal[tuple(index)] = t[tuple(src)]
    ideal_vec = RegisterVector(layout=mu.layout.concat(RegisterLayout.of(("J2p", b + 1))),
                               amplitudes=ideal.reshape(-1))
    fid = abs(complex(np.vdot(ideal_vec.amplitudes, decoded.aligned(ideal_vec.layout.labels))))

    # rho^j on B C1..Cb: Phi_BC at slot j, sigma elsewhere
    phi_bc = setup.phi.marginal(["B", "C"]).matrix
    elements = measurement_elements(ops)
    srm_success = 0.0
    for j in range(1, b + 1):
        rest = kron_power(setup.sigma, b - 1) if b > 1 else np.ones((1, 1), dtype=np.complex128)
        rho_j = place_at_slot(phi_bc, rest, setup.dims["B"], setup.dims["C"], j, b)
        srm_success += float(np.real(np.trace(elements[j - 1] @ rho_j))) / b

    hn_exact = hayashi_nagaoka_error(setup, b)
    hn_stated = 2.0 * config.eps2 ** 2 + 4.0 * b * setup.type_two_error
    error = 1.0 - fid
    return DecodingAnalysis(
        b=b, fidelity=fid, srm_success=srm_success, decoding_error=error,
        hn_exact=hn_exact, hn_stated=hn_stated,
        fidelity_bound_holds=fid >= srm_success - 1e-9,
        error_bound_holds=error <= hn_stated + GUARANTEE_SLACK,
    )


