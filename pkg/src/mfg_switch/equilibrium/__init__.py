from .fixed_instant import (
    EqualizationResult,
    Example3Solution,
    FixedCertificate,
    FixedEquilibriumReport,
    FixedLink,
    FixedSwitchInstance,
    ParallelSolution,
    certify_fixed_distribution,
    equalize_parallel_links,
    example2,
    example3,
    find_fixed_instant_equilibrium,
    parallel_links,
    solve_equalization,
    solve_example3,
    solve_parallel_links,
)
from .fixed_point import (
    BestResponse,
    EquilibriumOptions,
    EquilibriumReport,
    best_response,
    find_equilibrium,
)
from .monotonicity import MonotonicityReport, check_monotonicity
from .reference_checks import ReferenceCheck, ReferenceReport, verify_reference_instances
from .refinement import RefinementReport, RefinementStep, refine_epsilon

__all__ = [
    "BestResponse",
    "EqualizationResult",
    "EquilibriumOptions",
    "EquilibriumReport",
    "Example3Solution",
    "FixedCertificate",
    "FixedEquilibriumReport",
    "FixedLink",
    "FixedSwitchInstance",
    "MonotonicityReport",
    "ParallelSolution",
    "ReferenceCheck",
    "ReferenceReport",
    "RefinementReport",
    "RefinementStep",
    "best_response",
    "certify_fixed_distribution",
    "check_monotonicity",
    "equalize_parallel_links",
    "example2",
    "example3",
    "find_equilibrium",
    "find_fixed_instant_equilibrium",
    "parallel_links",
    "solve_equalization",
    "solve_example3",
    "solve_parallel_links",
    "verify_reference_instances",
]
