# Inequality checkers, one class per registered suite
from .operator_inequalities import HayashiNagaokaChecker, GentleMeasurementChecker, PrettyGoodMeasurementChecker
from .entropy_chains import DHChainChecker, ComparisonChainChecker, SpreadInequalityChecker
from .state_properties import ConvexSplitChecker, FidelityMonotonicityChecker, PurifiedTriangleChecker
