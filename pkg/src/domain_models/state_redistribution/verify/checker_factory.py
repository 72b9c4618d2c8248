# src/domain_models/state_redistribution/verify/checker_factory.py

from typing import Dict, List, Optional, Type

from domain_models.state_redistribution.verify.checkers.entropy_chains import (
    ComparisonChainChecker,
    DHChainChecker,
    SpreadInequalityChecker,
)
from domain_models.state_redistribution.verify.checkers.operator_inequalities import (
    GentleMeasurementChecker,
    HayashiNagaokaChecker,
    PrettyGoodMeasurementChecker,
)
from domain_models.state_redistribution.verify.checkers.state_properties import (
    ConvexSplitChecker,
    FidelityMonotonicityChecker,
    PurifiedTriangleChecker,
)
from domain_models.state_redistribution.verify.contracts.base_checker import BaseChecker
from shared_libs.utils.exceptions import ParameterError


class CheckerFactory:
    """
    Builds checker instances by suite name.
    """

    def __init__(self):
        self._checker_types: Dict[str, Type[BaseChecker]] = {
            checker.name: checker
            for checker in (
                HayashiNagaokaChecker,
                GentleMeasurementChecker,
                PrettyGoodMeasurementChecker,
                DHChainChecker,
                ComparisonChainChecker,
                SpreadInequalityChecker,
                ConvexSplitChecker,
                FidelityMonotonicityChecker,
                PurifiedTriangleChecker,
            )
        }

    def available(self) -> List[str]:
        return list(self._checker_types)

    def build(self, name: str, slack: Optional[float] = None) -> BaseChecker:
        if not name or name not in self._checker_types:
            raise ParameterError(f"Unsupported check suite: {name}. Known suites: {', '.join(self._checker_types)}.")
        return self._checker_types[name](slack)
