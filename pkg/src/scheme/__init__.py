"""
Scheme Modules
==============
Exact rate / load analysis, row placement and the coded shuffle plan.
"""

from .latency import TradeoffCurve, TradeoffPoint, latency, tradeoff_curve, tradeoff_point
from .params import RatePair, SystemParams, parse_fraction
from .placement import (
    Block,
    DivisibilityVerdict,
    PlacementMap,
    SubsetIndex,
    divisibility_check,
    partition_rows,
    reconstructible,
    redundancy_census,
    server_rows,
)
from .rates import (
    FeasibilityVerdict,
    LoadBreakdown,
    baseline_rates,
    binomial,
    check_feasible,
    effective_storage,
    enumerate_feasible,
    fast_total_load,
    load_breakdown,
    optimize_rates,
    phase_message_count,
    reconstruction_case,
    uncoded_rates,
)
from .shuffle import (
    GroupShuffle,
    IVComponent,
    IVStore,
    MulticastMessage,
    ReduceAssignment,
    ShufflePhase,
    ShufflePlan,
    assign_reduce,
    build_plan,
    decode_message,
    deliver,
    encode_message,
    needed_ivs,
    plan_load,
    transmit,
)

__all__ = [
    'TradeoffCurve', 'TradeoffPoint', 'latency', 'tradeoff_curve', 'tradeoff_point',
    'RatePair', 'SystemParams', 'parse_fraction',
    'Block', 'DivisibilityVerdict', 'PlacementMap', 'SubsetIndex', 'divisibility_check',
    'partition_rows', 'reconstructible', 'redundancy_census', 'server_rows',
    'FeasibilityVerdict', 'LoadBreakdown', 'baseline_rates', 'binomial', 'check_feasible',
    'effective_storage', 'enumerate_feasible', 'fast_total_load', 'load_breakdown',
    'optimize_rates', 'phase_message_count', 'reconstruction_case', 'uncoded_rates',
    'GroupShuffle', 'IVComponent', 'IVStore', 'MulticastMessage', 'ReduceAssignment',
    'ShufflePhase', 'ShufflePlan', 'assign_reduce', 'build_plan', 'decode_message', 'deliver',
    'encode_message', 'needed_ivs', 'plan_load', 'transmit',
]
