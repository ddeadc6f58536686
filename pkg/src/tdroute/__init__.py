"""Shortest-path routing for road networks with time-dependent speeds."""

from .model import (
    CONSTANT,
    KINDS,
    LINEAR,
    PERIODIC,
    POLICIES,
    STATIC,
    Arc,
    SpeedProfile,
    TdGraph,
    TimeDivision,
    linear_coeffs,
    locate_interval,
    profile_speed,
    speed_at,
)
from .traversal import (
    AelTable,
    OpCounter,
    TraversalResult,
    att,
    att_linear,
    bounded_fatt,
    build_ael,
    compute_q,
    effective_length,
    fatt,
    interp_piecewise_linear,
    l_fatt,
)
from .routing import (
    ATT,
    ATT_LINEAR,
    B_FATT,
    FATT,
    L_FATT,
    STRATEGIES,
    UNREACHABLE,
    PathResult,
    QueryStats,
    RouteResult,
    shortest_path_to,
    shortest_paths,
    traverse_arc,
)
from .io_gen import (
    GeneratorConfig,
    GraphFormatError,
    dumps,
    generate,
    load,
    loads,
    sample_graph,
    save,
    validate_file,
)
from .bench import BenchRecord, ChecksumMismatch, SweepConfig, run_sweep, to_csv

__version__ = "0.1.0"
