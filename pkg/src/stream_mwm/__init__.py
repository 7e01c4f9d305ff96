"""Single-pass bounded-memory maximum weight matching.

A streaming engine that keeps O(n * queue_cap) stack entries while
guaranteeing a (2 + epsilon)-approximation, plus sequential reference
solvers, an exact small-instance oracle, runtime monitors, seeded stream
generators, and a benchmark CLI.
"""

from .core import (
    I64_MAX,
    CapacityError,
    EdgeStream,
    Matching,
    Params,
    PotentialOverflowError,
    StreamFormatError,
    WeightedEdge,
    compute_params,
    is_heavy,
    matching_weight,
    parse_epsilon,
)
from .engine import EdgeOutcome, StreamingState, run_stream
from .generators import GeneratorKind, GeneratorSpec, StreamOrder, generate
from .monitors import (
    CheckVerdict,
    MonitorFailure,
    MonitorStats,
    TraceEvent,
    check_eviction_gap,
    check_phi_growth,
    check_ratio_bound,
    check_terminal_weights,
    dump_trace,
    load_trace,
)
from .reference import EXACT_MAX_NODES, Graph, exact_mwm, greedy_sorted, mwm_simple
from .report import RunReport, TimingStats
from .streamio import parse_stream, read_stream, serialize_stream

__version__ = "0.1.0"

__all__ = [
    "I64_MAX",
    "CapacityError",
    "CheckVerdict",
    "EdgeOutcome",
    "EdgeStream",
    "EXACT_MAX_NODES",
    "GeneratorKind",
    "GeneratorSpec",
    "Graph",
    "Matching",
    "MonitorFailure",
    "MonitorStats",
    "Params",
    "PotentialOverflowError",
    "RunReport",
    "StreamFormatError",
    "StreamOrder",
    "StreamingState",
    "TimingStats",
    "TraceEvent",
    "WeightedEdge",
    "check_eviction_gap",
    "check_phi_growth",
    "check_ratio_bound",
    "check_terminal_weights",
    "compute_params",
    "dump_trace",
    "exact_mwm",
    "generate",
    "greedy_sorted",
    "is_heavy",
    "load_trace",
    "matching_weight",
    "mwm_simple",
    "parse_epsilon",
    "parse_stream",
    "read_stream",
    "run_stream",
    "serialize_stream",
]
