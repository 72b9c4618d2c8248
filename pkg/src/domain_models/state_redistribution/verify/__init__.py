# Verification suites
from .checkers.operator_inequalities import check_hayashi_nagaoka, check_gentle, check_pgm
from .checkers.entropy_chains import check_dh_chain, check_comparison_chain, check_spread_inequality
from .checkers.state_properties import check_convex_split, check_fidelity_monotonicity, check_purified_triangle
from .checker_factory import CheckerFactory
from .suite_orchestrator import SuiteOrchestrator, run_suite
from .asymptotics import asymptotic_sweep
