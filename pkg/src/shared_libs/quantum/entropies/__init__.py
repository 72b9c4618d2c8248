"""
One-shot entropic quantities with optimizer certificates.
"""

from .schemas import EntropyResult, SolverReport, SpreadReport
from .basic import (
    fidelity,
    fidelity_and_distance,
    purified_distance,
    d_half,
    von_neumann,
    relative_entropy,
    information_variance,
    mutual_information,
    cond_mutual_information,
    dmax,
    min_entropy,
    max_rank_entropy,
    support_contained,
)
from .hypothesis_testing import dh_eps, classical_dh_lp
from .conditional import hmin_cond, hmax_cond, imax, min_trace_dominating
from .smoothing import smooth_dmax, smooth_split_dmax, split_dmax, hmin_eps, hmax_eps, imax_eps
from .spread import entanglement_spread, spread_ks

__all__ = [
    "EntropyResult", "SolverReport", "SpreadReport",
    "fidelity", "fidelity_and_distance", "purified_distance", "d_half",
    "von_neumann", "relative_entropy", "information_variance",
    "mutual_information", "cond_mutual_information",
    "dmax", "min_entropy", "max_rank_entropy", "support_contained",
    "dh_eps", "classical_dh_lp",
    "hmin_cond", "hmax_cond", "imax", "min_trace_dominating",
    "smooth_dmax", "smooth_split_dmax", "split_dmax", "hmin_eps", "hmax_eps", "imax_eps",
    "entanglement_spread", "spread_ks",
]
