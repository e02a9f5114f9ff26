from mfg_switch.costs import CostParams, validate_assumptions
from mfg_switch.discretization import EpsPartition
from mfg_switch.equilibrium import (
    EquilibriumOptions,
    FixedSwitchInstance,
    check_monotonicity,
    find_equilibrium,
    refine_epsilon,
    solve_example3,
    solve_parallel_links,
    verify_reference_instances,
)
from mfg_switch.network import Node
from mfg_switch.profiles import MassField, StepProfile
from mfg_switch.solver import TimeGrid, solve_value

__version__ = "0.1.0"
__all__ = [
    "CostParams",
    "EpsPartition",
    "EquilibriumOptions",
    "FixedSwitchInstance",
    "MassField",
    "Node",
    "StepProfile",
    "TimeGrid",
    "check_monotonicity",
    "find_equilibrium",
    "refine_epsilon",
    "solve_example3",
    "solve_parallel_links",
    "solve_value",
    "validate_assumptions",
    "verify_reference_instances",
]
