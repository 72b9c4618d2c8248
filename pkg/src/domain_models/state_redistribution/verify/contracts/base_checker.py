# src/domain_models/state_redistribution/verify/contracts/base_checker.py

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

import numpy as np

from domain_models.state_redistribution.schemas import CheckReport
from shared_libs.configs.config_loader import get_settings

logger = logging.getLogger(__name__)


class BaseChecker(ABC):
    """
    Interface for inequality checkers.
    A checker evaluates one inequality on given inputs and can draw its own seeded
    random inputs, so every trial of a suite is reproducible from (seed, dim).
    """
    name: str = "base"

    def __init__(self, slack: Optional[float] = None):
        verify = get_settings().verify
        self.slack = slack if slack is not None else verify.suite_slack.get(self.name, verify.default_slack)

    def _slack(self, slack: Optional[float]) -> float:
        return self.slack if slack is None else slack

    @abstractmethod
    def evaluate(self, **inputs: Any) -> CheckReport:
        """Synchronously checks the inequality on the given inputs."""
        pass

    @abstractmethod
    def generate_inputs(self, rng: np.random.Generator, dim: int) -> Dict[str, Any]:
        """Draws the keyword inputs of `evaluate` for one trial."""
        pass

    def run_trial(self, seed: int, dim: int) -> CheckReport:
        rng = np.random.default_rng(seed)
        report = self.evaluate(**self.generate_inputs(rng, dim))
        report = report.with_digest({"seed": seed, "dims": [dim]})
        if not report.passed:
            logger.warning(f"Check '{self.name}' failed for seed={seed}, dim={dim}: "
                           f"lhs={report.lhs:.12g}, rhs={report.rhs:.12g}.")
        return report
