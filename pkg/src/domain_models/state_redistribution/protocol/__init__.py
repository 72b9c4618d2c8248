# State Redistribution Protocol
from .convex_split import convex_split_state, convex_split_fidelity
from .position_decoding import index_split, block_count, build_position_operators, decoder_isometry
from .steps import IsometryStep, AppendState, LocalIsometry, ControlledSwap, RegisterTransfer, RegisterVector
from .redistribution import (
    run_protocol,
    run_protocol_reversed,
    cost_bound,
    achievable_cost,
    asymptotic_cost_trend,
    exact_mixture_check,
    decoding_analysis,
    canonical_input,
)
