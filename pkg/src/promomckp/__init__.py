"""Online and offline multiple-choice knapsack solvers for promotion budgets."""

from promomckp.dominance import DominantProfile, build_profile, dominant_items, efficiency_angle
from promomckp.model import (
    Assignment,
    Instance,
    Item,
    OfferSet,
    evaluate_assignment,
    make_offer_set,
    read_instance_csv,
    validate_instance,
    write_instance_csv,
)
from promomckp.oracle import BoundType, OracleResult, exhaustive_optimum, lp_upper_bound
from promomckp.solvers import (
    SolverConfig,
    SolveTrace,
    solve_global,
    solve_greedy,
    solve_local,
    solve_offline_mckp,
    solve_online,
)
from promomckp.synthgen import SimParams, generate
from promomckp.threshold import AngleFunction, IncrementPool, build_function, pool_add, retrieve_threshold

__version__ = "0.1.0"

__all__ = [
    "AngleFunction",
    "Assignment",
    "BoundType",
    "DominantProfile",
    "IncrementPool",
    "Instance",
    "Item",
    "OfferSet",
    "OracleResult",
    "SimParams",
    "SolveTrace",
    "SolverConfig",
    "build_function",
    "build_profile",
    "dominant_items",
    "efficiency_angle",
    "evaluate_assignment",
    "exhaustive_optimum",
    "generate",
    "lp_upper_bound",
    "make_offer_set",
    "pool_add",
    "read_instance_csv",
    "retrieve_threshold",
    "solve_global",
    "solve_greedy",
    "solve_local",
    "solve_offline_mckp",
    "solve_online",
    "validate_instance",
    "write_instance_csv",
]
