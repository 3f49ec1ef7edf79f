from .core import (
    PLANNERS,
    RNG_ALGORITHM,
    PlannerMetrics,
    PlannerParams,
    PlanningError,
    PlanResult,
    derive_seed,
    make_rng,
    plan_lasmp,
    plan_rrt,
    steer,
)
from .geometry import (
    SamplingSubset,
    detect_intersection,
    get_subset,
    heading_after,
    intermediate_states,
    sample_subset,
    subset_gain,
    turn_to_direction,
)
from .tree import Path, SearchTree, extract_path, nearest_node
