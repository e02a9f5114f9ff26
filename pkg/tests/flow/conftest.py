from fractions import Fraction

import pytest

from mfg_switch.costs.cost_model import CostParams
from mfg_switch.discretization.partition import EpsPartition
from mfg_switch.profiles.mass_field import MassField
from mfg_switch.solver.value_solver import solve_value


@pytest.fixture
def two_targets():
    """N = 2 on [0, 2] with a congested origin and all mass starting there."""
    return CostParams(size=2, horizon=2, weights={0: 1.6}, free_flow_cost=0.1)


@pytest.fixture
def initial():
    return MassField.static(2, 2, {0: Fraction(1)})


@pytest.fixture
def part():
    return EpsPartition(2, 16)


@pytest.fixture
def static_table(two_targets, initial, part):
    return solve_value(initial, two_targets, part.grid(1), mode="analytic")
