from .analytic import ChainSolution, phi_chain, phi_two_step
from .time_grid import TimeGrid
from .value_solver import argmin_map, solve_value, tie_tolerance
from .value_table import ValueTable

__all__ = [
    "ChainSolution",
    "TimeGrid",
    "ValueTable",
    "argmin_map",
    "phi_chain",
    "phi_two_step",
    "solve_value",
    "tie_tolerance",
]
