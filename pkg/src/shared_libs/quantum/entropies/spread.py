# src/shared_libs/quantum/entropies/spread.py

from typing import Sequence

from shared_libs.quantum.entropies.basic import StateLike, dmax, max_rank_entropy, min_entropy
from shared_libs.quantum.entropies.schemas import SpreadReport
from shared_libs.quantum.states import PureVector
from shared_libs.utils.exceptions import SupportViolationError


def entanglement_spread(psi_a: StateLike) -> SpreadReport:
    """Delta = H_0 - H_inf of a marginal."""
    h0 = max_rank_entropy(psi_a)
    h_inf = min_entropy(psi_a)
    return SpreadReport(h0=h0, h_inf=h_inf, spread=max(0.0, h0 - h_inf))


def spread_ks(phi: PureVector, r: Sequence[str], c: Sequence[str]) -> SpreadReport:
    """
    k1 = D_max(phi_RC || phi_R (x) phi_C), k2 = H_inf(phi_C), k3 = H_inf(phi_R), k4 = H_inf(phi_RC).
    The spread fields describe phi_C.
    """
    r, c = list(r), list(c)
    phi_rc = phi.marginal(r + c)
    phi_r, phi_c = phi.marginal(r), phi.marginal(c)
    k1 = dmax(phi_rc, phi_r.tensor(phi_c))
    if k1.infinite:
        raise SupportViolationError("supp(phi_RC) is not contained in supp(phi_R (x) phi_C).")
    base = entanglement_spread(phi_c)
    return base.model_copy(update={
        "k1": k1.value,
        "k2": min_entropy(phi_c),
        "k3": min_entropy(phi_r),
        "k4": min_entropy(phi_rc),
    })
