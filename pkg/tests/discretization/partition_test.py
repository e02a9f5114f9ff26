from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mfg_switch.costs.cost_model import CostParams
from mfg_switch.discretization.partition import (
    EpsPartition,
    eps_argmin_map,
    eps_targets,
    round_instant,
)
from mfg_switch.network.topology import Node
from mfg_switch.profiles.mass_field import MassField
from mfg_switch.solver.time_grid import TimeGrid
from mfg_switch.solver.value_solver import solve_value
from mfg_switch.solver.value_table import ValueTable
from mfg_switch.utilities.errors import BoundaryQuery, DimensionMismatch, OutOfRange

F = Fraction
P0, P1 = Node(0, 1), Node(1, 1)


def test_partition_nodes_are_exact():
    part = EpsPartition(2, 8)
    assert part.epsilon == F(1, 4)
    assert part.nodes[-1] == 2
    assert part.epsilon * part.m == part.horizon
    assert part.contains(F(3, 4))
    assert not part.contains(F(1, 3))


def test_default_grid_is_close_to_256_steps():
    part = EpsPartition(2, 8)
    assert part.default_divisor() == 32
    assert part.grid().steps == 256
    assert part.grid(5).steps == 40
    assert EpsPartition(2, 300).grid().steps == 300


def test_partition_validation():
    with pytest.raises(ValueError):
        EpsPartition(2, 0)
    with pytest.raises(ValueError):
        EpsPartition(0, 4)
    with pytest.raises(DimensionMismatch):
        EpsPartition(2, 4).check_grid(TimeGrid(2, 6))


def test_rounding_cases():
    part = EpsPartition(1, 10)
    assert round_instant(0.234, part) == {F(1, 5)}
    assert round_instant(0.25, part) == {F(1, 5), F(3, 10)}
    assert round_instant(0.27, part) == {F(3, 10)}
    assert round_instant(1, part) == {F(1)}
    with pytest.raises(OutOfRange):
        round_instant(F(11, 10), part)


@given(st.integers(min_value=1, max_value=50), st.integers(min_value=0, max_value=1000))
def test_rounding_stays_within_half_epsilon(m, k):
    part = EpsPartition(2, m)
    tau = F(2 * k, 1000)
    rounded = round_instant(tau, part)
    assert 1 <= len(rounded) <= 2
    assert all(part.contains(r) for r in rounded)
    assert all(abs(r - tau) <= part.epsilon / 2 for r in rounded)


@given(st.integers(min_value=1, max_value=50), st.data())
def test_partition_nodes_are_fixed_points(m, data):
    part = EpsPartition(2, m)
    k = data.draw(st.integers(min_value=0, max_value=m))
    assert round_instant(part.epsilon * k, part) == {part.epsilon * k}


def hand_table():
    """Argmin sets chosen to exercise midpoints, tied runs and lifting on ε = 1/2, δ = 1/4."""
    return ValueTable(
        size=1,
        grid=TimeGrid(2, 8),
        values=np.zeros((2, 9)),
        argmins={
            (0, 0): ((1, F(1, 4)),),
            (0, 2): ((1, F(5, 4)),),
            (0, 4): ((1, F(5, 4)), (1, F(3, 2)), (1, F(7, 4))),
            (0, 6): ((1, F(2)),),
        },
    )


def test_midpoint_gives_two_instants():
    targets, lifted = eps_targets(hand_table(), EpsPartition(2, 4), P0, F(1, 2))
    assert targets == {(P1, F(1)), (P1, F(3, 2))}
    assert lifted == 0


def test_rounded_instant_not_after_decision_is_lifted():
    targets, lifted = eps_targets(hand_table(), EpsPartition(2, 4), P0, 0)
    assert targets == {(P1, F(1, 2))}
    assert lifted == 1


def test_tied_run_covers_every_partition_node_in_between():
    targets, lifted = eps_targets(hand_table(), EpsPartition(2, 4), P0, 1)
    assert targets == {(P1, F(3, 2)), (P1, F(2))}
    assert lifted == 1


def test_horizon_is_its_own_rounding():
    assert eps_argmin_map(hand_table(), EpsPartition(2, 4), P0, F(3, 2)) == {(P1, F(2))}


def test_boundary_queries():
    part = EpsPartition(2, 4)
    with pytest.raises(BoundaryQuery):
        eps_targets(hand_table(), part, P1, 0)
    with pytest.raises(BoundaryQuery):
        eps_targets(hand_table(), part, P0, 2)


def test_single_target_network_switches_at_horizon():
    params = CostParams(size=1, horizon=2)
    rho = MassField.static(1, 2, {0: 1})
    part = EpsPartition(2, 4)
    table = solve_value(rho, params, part.grid(2), check_resolution=False)
    for s in part.nodes[:-1]:
        assert eps_argmin_map(table, part, P0, s) == {(P1, F(2))}
