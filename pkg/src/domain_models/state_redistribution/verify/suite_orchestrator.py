# src/domain_models/state_redistribution/verify/suite_orchestrator.py

import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Sequence

from domain_models.state_redistribution.schemas import CheckReport, SuiteReport
from domain_models.state_redistribution.verify.checker_factory import CheckerFactory
from domain_models.state_redistribution.verify.contracts.base_checker import BaseChecker
from shared_libs.configs.config_loader import get_settings
from shared_libs.utils.exceptions import ParameterError
from shared_libs.utils.logging_utils import log_event

logger = logging.getLogger(__name__)

DEFAULT_DIMS = (2, 3, 4)


class SuiteOrchestrator:
    """
    Runs seeded trials of one checker concurrently and folds them into a SuiteReport.
    Trial i uses seed + i and dims[i % len(dims)]; the report is sorted by seed, so the
    outcome does not depend on completion order.
    """

    def __init__(self, checker: BaseChecker, max_workers: Optional[int] = None):
        self.checker = checker
        self.max_workers = max_workers or get_settings().verify.max_workers

    async def async_run(self, trials: int, seed: int, dims: Sequence[int]) -> SuiteReport:
        if trials < 1:
            raise ParameterError(f"trials must be positive, got {trials}.")
        if not dims:
            raise ParameterError("At least one trial dimension is required.")
        dims = [int(d) for d in dims]
        plan = [(seed + i, dims[i % len(dims)]) for i in range(trials)]

        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            tasks = [loop.run_in_executor(pool, self.checker.run_trial, s, d) for s, d in plan]
            # Chạy song song các trial; lỗi của từng trial được giữ lại
            results = await asyncio.gather(*tasks, return_exceptions=True)

        reports: List[CheckReport] = []
        errors = []
        for (trial_seed, dim), result in sorted(zip(plan, results), key=lambda item: item[0][0]):
            if isinstance(result, Exception):
                errors.append({"seed": trial_seed, "dims": [dim], "error": type(result).__name__,
                               "message": str(result)})
                logger.warning(f"Trial seed={trial_seed} of '{self.checker.name}' raised {type(result).__name__}: {result}")
            else:
                reports.append(result)

        failures = [r for r in reports if not r.passed]
        max_violation = max((r.violation for r in reports), default=float("-inf"))
        report = SuiteReport(
            suite=self.checker.name,
            trials=trials,
            seed=seed,
            dims=dims,
            passed=not failures and not errors,
            failures=failures,
            errors=errors,
            max_violation=max_violation,
        )
        log_event(logger, f"Suite '{self.checker.name}' finished", "suite_completed",
                  {"trials": trials, "seed": seed, "failures": len(failures), "errors": len(errors),
                   "max_violation": max_violation})
        return report

    def run(self, trials: int, seed: int, dims: Sequence[int]) -> SuiteReport:
        return asyncio.run(self.async_run(trials, seed, dims))


def run_suite(name: str, trials: int, seed: int, dims: Optional[Sequence[int]] = None,
              slack: Optional[float] = None, max_workers: Optional[int] = None) -> SuiteReport:
    """Builds the named checker and runs an all-or-nothing batch of seeded trials."""
    checker = CheckerFactory().build(name, slack)
    return SuiteOrchestrator(checker, max_workers).run(trials, seed, list(dims or DEFAULT_DIMS))
