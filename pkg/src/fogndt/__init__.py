"""Delivery-latency region of a fog radio access network with two edge nodes and two users.

Latencies are high-SNR normalized delivery times (NDT). The package
evaluates the achievable and converse NDT bounds for per-file cache
allocations, builds explicit caching and delivery plans, cross-checks the
converse with an exact two-variable LP, and traces two-class trade-off
curves.
"""

from .bounds_oracle import (
    HalfPlane,
    LpSolution,
    check_symmetrization,
    check_tightness,
    constraint_polytope,
    lp_min_total,
)
from .closed_form import (
    Strategy,
    StrategyInvocation,
    ndt_inner,
    ndt_inner_component,
    ndt_outer,
    ndt_outer_component,
    strategy_ndt,
)
from .core import (
    CachePartition,
    ConstraintError,
    Demand,
    NdtError,
    NdtPoint,
    PopularityProfile,
    StructureError,
    SystemParams,
    symmetrize,
    validate_partition,
)
from .kernels import BACKEND
from .optimizer import (
    ClassScenario,
    average_ndt,
    pareto_envelope,
    slice_point,
    trace_average_tradeoff,
    trace_region_slice,
)
from .planner import (
    build_cache_placement,
    build_delivery_plan,
    mix_placements,
    mix_plans,
    plan_ndt,
    verify_plan,
)

__version__ = "0.1.0"
