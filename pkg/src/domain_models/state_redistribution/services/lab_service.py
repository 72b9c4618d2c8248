# src/domain_models/state_redistribution/services/lab_service.py

import logging
import os
from typing import Any, Dict, List, Optional, Sequence, Union

from domain_models.state_redistribution.protocol import (
    achievable_cost,
    cost_bound,
    run_protocol,
    run_protocol_reversed,
)
from domain_models.state_redistribution.schemas import ProtocolConfig, SuiteReport
from domain_models.state_redistribution.verify import CheckerFactory, asymptotic_sweep, run_suite
from shared_libs.configs.config_loader import ConfigLoader, get_settings
from shared_libs.configs.schemas import SuiteConfigSchema
from shared_libs.quantum import entropies
from shared_libs.quantum.entropies.basic import as_operator
from shared_libs.quantum.states import PureVector, QuantumState
from shared_libs.utils.exceptions import ParameterError
from shared_libs.utils.logging_utils import log_event

logger = logging.getLogger(__name__)

State = Union[QuantumState, PureVector]

DIVERGENCES = ("fidelity", "dmax", "dh", "dhalf", "rel")
BIPARTITE = ("mi", "hmin", "hmax", "imax")
QUANTITIES = DIVERGENCES + BIPARTITE + ("cmi", "spread")
DEFAULT_TRIALS = 100
DEFAULT_SUITE_CONFIG = os.path.join("configs", "verify", "suite_config.yaml")


def _entropy_payload(quantity: str, result: entropies.EntropyResult) -> Dict[str, Any]:
    return {"quantity": quantity, "value": result.bits, "infinite": result.infinite,
            "certificate_kind": result.certificate_kind, "solver": result.solver_report.model_dump()}


def _require_parts(partition: Optional[Sequence[str]], count: int, quantity: str) -> List[List[str]]:
    if not partition or len(partition) != count:
        raise ParameterError(f"Quantity '{quantity}' needs --partition with {count} groups.")
    return [group.split("+") for group in partition]


class LabService:
    """
    Command layer between the cli and the library: one method per subcommand.
    Every method returns the result object and whether the command counts as passed.
    """

    def __init__(self, suite_config: Optional[SuiteConfigSchema] = None):
        self.suite_config = suite_config
        self.factory = CheckerFactory()

    # --- entropy ---
    def entropy(self, quantity: str, state: State, sigma: Optional[State] = None, eps: Optional[float] = None,
                partition: Optional[Sequence[str]] = None) -> Dict[str, Any]:
        if quantity not in QUANTITIES:
            raise ParameterError(f"Unknown quantity '{quantity}'. Choose one of {', '.join(QUANTITIES)}.")
        if eps is not None and not 0.0 <= eps < 1.0:
            raise ParameterError(f"eps must lie in [0, 1), got {eps}.")

        if quantity in DIVERGENCES:
            if sigma is None:
                raise ParameterError(f"Quantity '{quantity}' needs --sigma.")
            rho, other = as_operator(state), as_operator(sigma)
            if quantity == "fidelity":
                f = entropies.fidelity_and_distance(rho, other)
                return {"quantity": quantity, "value": f.fidelity, "purified_distance": f.purified_distance}
            if quantity == "dh":
                if eps is None:
                    raise ParameterError("Quantity 'dh' needs --eps.")
                return _entropy_payload(quantity, entropies.dh_eps(rho, other, eps))
            if quantity == "dmax" and eps:
                return _entropy_payload(quantity, entropies.smooth_dmax(rho, other, eps))
            compute = {"dmax": entropies.dmax, "dhalf": entropies.d_half, "rel": entropies.relative_entropy}[quantity]
            return _entropy_payload(quantity, compute(rho, other))

        if quantity in BIPARTITE:
            a, b = _require_parts(partition, 2, quantity)
            if quantity == "mi":
                return {"quantity": quantity, "value": entropies.mutual_information(state, a, b)}
            smoothed = {"hmin": entropies.hmin_eps, "hmax": entropies.hmax_eps, "imax": entropies.imax_eps}
            plain = {"hmin": entropies.hmin_cond, "hmax": entropies.hmax_cond, "imax": entropies.imax}
            result = smoothed[quantity](state, a, b, eps) if eps else plain[quantity](state, a, b)
            return _entropy_payload(quantity, result)

        if quantity == "cmi":
            a, b, c = _require_parts(partition, 3, quantity)
            return {"quantity": quantity, "value": entropies.cond_mutual_information(state, a, b, c)}

        # spread: two groups (R, C) of a pure state give k1..k4; otherwise the spread of one marginal
        if partition and len(partition) > 2:
            raise ParameterError(f"Quantity 'spread' takes one group or two groups (R, C), got {len(partition)}.")
        unknown = sorted({label for group in partition or [] for label in group.split("+")}
                         - set(state.layout.labels))
        if unknown:
            raise ParameterError(f"Unknown register(s) {unknown} in --partition; state has {list(state.layout.labels)}.")
        if partition and len(partition) == 2:
            if not isinstance(state, PureVector):
                raise ParameterError("Quantity 'spread' with two groups needs a pure (vector) state file.")
            r, c = _require_parts(partition, 2, quantity)
            report = entropies.spread_ks(state, r, c)
        else:
            target = state.marginal(partition[0].split("+")) if partition else state
            report = entropies.entanglement_spread(as_operator(target))
        return {"quantity": quantity, **report.model_dump()}

    # --- protocol ---
    def protocol(self, state: State, partition: Sequence[str], config: ProtocolConfig, reverse: bool = False):
        if not isinstance(state, PureVector):
            raise ParameterError("The protocol needs a pure input (a state file with 'vector').")
        run = run_protocol_reversed if reverse else run_protocol
        transcript = run(state, config, partition)
        return transcript, True

    # --- cost ---
    def cost(self, state: State, partition: Sequence[str], config: ProtocolConfig, smoothed: bool = False):
        if not isinstance(state, PureVector):
            raise ParameterError("The cost needs a pure input (a state file with 'vector').")
        result = {
            "B": cost_bound(state, config, "B", partition, smoothed),
            "A": cost_bound(state, config, "A", partition, smoothed),
            "achievable": achievable_cost(state, config, partition, smoothed),
            "smoothed": smoothed,
        }
        return result, True

    # --- verify ---
    def _suite_plan(self, suite: str, trials: Optional[int], dims: Optional[Sequence[int]]):
        if suite == "all":
            if self.suite_config is None:
                return [(name, trials or DEFAULT_TRIALS, dims, None) for name in self.factory.available()]
            entries = [s for s in self.suite_config.suites if s.enabled]
            return [(s.name, trials or s.trials, dims or s.dims, s.slack) for s in entries]
        entry = self.suite_config.get(suite) if self.suite_config is not None else None
        if entry is None:
            return [(suite, trials or DEFAULT_TRIALS, dims, None)]
        return [(suite, trials or entry.trials, dims or entry.dims, entry.slack)]

    def verify(self, suite: str, trials: Optional[int], seed: int, dims: Optional[Sequence[int]] = None):
        reports: List[SuiteReport] = []
        for name, n_trials, suite_dims, slack in self._suite_plan(suite, trials, dims):
            report = run_suite(name, n_trials, seed, suite_dims, slack=slack)
            reports.append(report)
        passed = all(r.passed for r in reports)
        log_event(logger, "Verification finished", "verify_completed",
                  {"suites": [r.suite for r in reports], "passed": passed})
        return reports, passed

    # --- sweep ---
    def sweep(self, rho: State, sigma: State, eps: float, n_max: int):
        report = asymptotic_sweep(rho, sigma, eps, n_max)
        return report, report.passed


def load_suite_config(path: Optional[str]) -> Optional[SuiteConfigSchema]:
    """Suite list from YAML, or None when no file is given or the default file is absent."""
    if path is None:
        if not os.path.exists(DEFAULT_SUITE_CONFIG):
            logger.debug("No suite configuration found; using built-in suite defaults.")
            return None
        path = DEFAULT_SUITE_CONFIG
    return ConfigLoader().get_suite_config(path)


def default_protocol_config(**overrides: Any) -> ProtocolConfig:
    """ProtocolConfig with eps defaults taken from the active settings."""
    defaults = get_settings().protocol
    values = {"eps1": defaults.default_eps1, "eps2": defaults.default_eps2}
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ProtocolConfig(**values)
