from .cost_model import (
    CostParams,
    EdgeCongestion,
    edge_cbar,
    path_cost,
    switch_cost,
    terminal_cost,
)
from .diagnostics import AssumptionReport, validate_assumptions

__all__ = [
    "AssumptionReport",
    "CostParams",
    "EdgeCongestion",
    "edge_cbar",
    "path_cost",
    "switch_cost",
    "terminal_cost",
    "validate_assumptions",
]
