import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfg_switch.costs.cost_model import CostParams, EdgeCongestion, switch_cost, terminal_cost
from mfg_switch.network.topology import (
    Node,
    SwitchPath,
    all_nodes,
    dominates,
    enumerate_node_paths,
    successors,
)
from mfg_switch.profiles.mass_field import MassField
from mfg_switch.solver.time_grid import TimeGrid
from mfg_switch.solver.value_solver import argmin_map, solve_value
from mfg_switch.utilities.errors import BoundaryQuery, DimensionMismatch, GridTooCoarse, OutOfRange

F = Fraction


def random_instance(size, seed):
    rng = np.random.default_rng(seed)
    weights = {i: float(rng.uniform(0.5, 2.0)) for i in range(2**size)}
    params = CostParams(
        size=size, horizon=2, weights=weights, earliness_rate=1.0, miss_penalty=3.0
    )
    shares = rng.dirichlet(np.ones(2**size))
    rho = MassField.static(size, 2, {i: float(s) for i, s in enumerate(shares)})
    return params, rho


def brute_force_value(params, rho, grid):
    """Cheapest admissible control from the origin at t = 0, enumerated exhaustively."""
    congestion = EdgeCongestion.from_field(rho, params)
    origin = Node.origin(params.size)
    later = grid.points[1:]
    best = float("inf")
    for end in all_nodes(params.size):
        if end == origin or not dominates(end, origin):
            continue
        for nodes in enumerate_node_paths(origin, end):
            switches = len(nodes) - 1
            for times in itertools.combinations(later, switches):
                if not end.is_target and times[-1] != params.horizon:
                    continue
                path = SwitchPath(nodes, (F(0),) + times, params.horizon)
                total = terminal_cost(path.nodes[-1], path.times[-1], params)
                for (p, t), (q, tau) in reversed(
                    list(zip(zip(path.nodes, path.times), zip(path.nodes[1:], path.times[1:])))
                ):
                    total = switch_cost(p, q, t, tau, rho, params, congestion) + total
                best = min(best, total)
    return best


@pytest.mark.parametrize("size,steps", [(1, 32), (2, 32), (3, 16)])
@pytest.mark.parametrize("seed", range(5))
def test_grid_value_matches_exhaustive_enumeration(size, steps, seed):
    params, rho = random_instance(size, seed)
    grid = TimeGrid(params.horizon, steps)
    table = solve_value(rho, params, grid, check_resolution=False)
    expected = brute_force_value(params, rho, grid)
    assert abs(table.value(Node.origin(size), 0) - expected) <= 1e-12


def test_single_target_value_is_cbar_over_remaining_time():
    params = CostParams(size=1, horizon=2, weights={0: 1.0, 1: 2.0})
    rho = MassField.static(1, 2, {0: F(1, 2), 1: F(1, 2)})
    grid = TimeGrid(2, 32)
    table = solve_value(rho, params, grid, check_resolution=False)
    cbar = table.cbar[(0, 1)]
    for t in grid.points[:-1]:
        assert table.value(Node(0, 1), t) == pytest.approx(cbar / float(2 - t), rel=1e-12)
        assert argmin_map(table, Node(0, 1), t) == {(Node(1, 1), F(2))}


def test_boundary_rows():
    params = CostParams(size=2, horizon=2, miss_penalty=4.0, earliness_rate=0.5)
    rho = MassField.static(2, 2, {0: 1})
    table = solve_value(rho, params, TimeGrid(2, 8), check_resolution=False)
    target = Node.target(2)
    assert table.value(target, F(1, 2)) == pytest.approx(0.75)
    assert table.value(Node(1, 2), 2) == pytest.approx(4.0)
    assert table.value(Node(0, 2), 2) == pytest.approx(8.0)


def test_argmin_map_rejects_boundary_queries():
    params = CostParams(size=1, horizon=2)
    rho = MassField.static(1, 2, {0: 1})
    table = solve_value(rho, params, TimeGrid(2, 4), check_resolution=False)
    with pytest.raises(BoundaryQuery):
        argmin_map(table, Node(1, 1), 0)
    with pytest.raises(BoundaryQuery):
        argmin_map(table, Node(0, 1), 2)
    with pytest.raises(OutOfRange):
        argmin_map(table, Node(0, 1), F(1, 3))


def steep_instance():
    """A cheap first switch followed by an expensive one: the first switch wants to be immediate."""
    params = CostParams(
        size=2, horizon=2, weights={0: 0.0, 1: 0.0, 2: 0.0, 3: 100.0},
        free_flow_cost=0.001,
        miss_penalty=1000.0,
    )
    return params, MassField.static(2, 2, {3: 1})


def test_grid_too_coarse_near_the_blow_up():
    params, rho = steep_instance()
    with pytest.raises(GridTooCoarse):
        solve_value(rho, params, TimeGrid(2, 4))


def test_min_gap_over_reachable_cells():
    params, rho = steep_instance()
    table = solve_value(rho, params, TimeGrid(2, 4), check_resolution=False)
    assert table.min_gap == F(1, 2)
    assert argmin_map(table, Node(0, 2), 0) == {(Node(1, 2), F(1, 2)), (Node(2, 2), F(1, 2))}


def test_analytic_mode_bounds_grid_mode_from_below():
    params = CostParams(size=2, horizon=2, weights={0: 1.6}, free_flow_cost=0.1)
    rho = MassField.static(2, 2, {0: 1})
    grid = TimeGrid(2, 256)
    exact = solve_value(rho, params, grid, mode="analytic")
    coarse = solve_value(rho, params, grid, check_resolution=False)
    origin = Node.origin(2)
    expected = (1.7**0.5 + 0.1**0.5) ** 2 / 2
    assert exact.value(origin, 0) == pytest.approx(expected, rel=1e-9)
    assert coarse.value(origin, 0) >= exact.value(origin, 0) - 1e-12
    assert coarse.value(origin, 0) - exact.value(origin, 0) < 1e-2
    assert exact.mode == "analytic"
    ratio = (1.7 / 0.1) ** 0.5
    assert all(
        abs(float(tau) - 2 * ratio / (ratio + 1)) < 1e-9 for _, tau in argmin_map(exact, origin, 0)
    )


def test_dimension_mismatch():
    params = CostParams(size=1, horizon=2)
    with pytest.raises(DimensionMismatch):
        solve_value(MassField.static(2, 2, {0: 1}), params, TimeGrid(2, 4))
    with pytest.raises(DimensionMismatch):
        solve_value(MassField.static(1, 2, {0: 1}), params, TimeGrid(3, 4))


def test_value_is_lipschitz_away_from_the_horizon():
    # from t <= T - k some gap of an optimal control is at least k/N; shrinking it by one
    # step bounds the slope by N² max C̄ / (k (k - N δ)), and V never decreases in t
    params, _ = random_instance(2, 0)
    grid = TimeGrid(2, 32)
    k = F(1, 4)
    last = grid.tick_of(params.horizon - k)
    rows = [p.index for p in all_nodes(2) if not p.is_target]
    for seed in range(10):
        _, rho = random_instance(2, seed)
        table = solve_value(rho, params, grid, check_resolution=False)
        quotients = np.diff(table.values[rows, : last + 1], axis=1) / float(grid.step)
        bound = 2**2 * max(table.cbar.values()) / float(k * (k - 2 * grid.step))
        assert quotients.min() >= -1e-9
        assert quotients.max() <= bound


def test_value_depends_continuously_on_the_field():
    params = CostParams(size=2, horizon=2, weights={0: 1.6}, free_flow_cost=0.1)
    grid = TimeGrid(2, 32)
    base = solve_value(MassField.static(2, 2, {0: 1.0}), params, grid, check_resolution=False)
    changes = []
    for scale in (1e-1, 1e-2, 1e-3, 1e-4):
        moved = MassField.static(2, 2, {0: 1.0 - scale, 1: scale})
        table = solve_value(moved, params, grid, check_resolution=False)
        changes.append(float(np.abs(table.values - base.values).max()))
    assert all(b < a for a, b in zip(changes, changes[1:]))
    assert changes[-1] < 1e-2


def test_analytic_mode_takes_stop_short_chains():
    params = CostParams(size=2, horizon=2, free_flow_cost=0.1, miss_penalty=0.0)
    rho = MassField.static(2, 2, {0: 1})
    grid = TimeGrid(2, 32)
    exact = solve_value(rho, params, grid, mode="analytic")
    coarse = solve_value(rho, params, grid, check_resolution=False)
    origin = Node.origin(2)
    assert exact.value(origin, 0) == pytest.approx(0.55, rel=1e-12)
    np.testing.assert_allclose(exact.values, coarse.values, rtol=1e-12)
    expected = {(Node(1, 2), F(2)), (Node(2, 2), F(2))}
    assert argmin_map(exact, origin, 0) == expected
    assert argmin_map(coarse, origin, 0) == expected


def test_analytic_mode_handles_four_targets():
    params = CostParams(size=4, horizon=2, free_flow_cost=0.1)
    rho = MassField.static(4, 2, {0: 1})
    grid = TimeGrid(2, 16)
    exact = solve_value(rho, params, grid, mode="analytic")
    coarse = solve_value(rho, params, grid, check_resolution=False)
    origin = Node.origin(4)
    expected = (1.1**0.5 + 3 * 0.1**0.5) ** 2 / 2
    assert exact.value(origin, 0) == pytest.approx(expected, rel=1e-9)
    assert np.all(exact.values <= coarse.values + 1e-12)
    assert {q for q, _ in argmin_map(exact, origin, 0)} == {Node(1 << i, 4) for i in range(4)}


PROFILES = [
    ({0: 1.6}, {0: 1.0}),
    ({1: 3.0}, {0: 0.5, 1: 0.5}),
    ({2: 0.5, 3: 2.0}, {0: 0.2, 2: 0.3, 3: 0.5}),
]


@pytest.mark.parametrize("weights,masses", PROFILES)
def test_value_and_switch_objective_are_convex_in_time(weights, masses):
    params = CostParams(
        size=2, horizon=2, weights=weights, free_flow_cost=0.1, miss_penalty=1000.0
    )
    rho = MassField.static(2, 2, masses)
    grid = TimeGrid(2, 64)
    table = solve_value(rho, params, grid, check_resolution=False)
    last = grid.tick_of(F(7, 4))
    times = np.array([float(t) for t in grid.points])
    for p in all_nodes(2):
        if p.is_target:
            continue
        row = table.values[p.index, : last + 1]
        assert np.all(np.diff(row, 2) >= -1e-9 * (1 + np.abs(row[1:-1])))
        for q in successors(p):
            # objective of the first switch from (p, 0) over τ in ]0, T - k]
            objective = table.cbar[(p.index, q.index)] / times[1 : last + 1] + table.values[q.index, 1 : last + 1]
            assert np.all(np.diff(objective, 2) >= -1e-9 * (1 + np.abs(objective[1:-1])))


@settings(deadline=None, max_examples=50)
@given(
    st.lists(st.floats(min_value=0.1, max_value=2.0), min_size=4, max_size=4),
    st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=4, max_size=4),
)
def test_value_never_exceeds_any_switch_and_meets_its_argmins(weights, masses):
    params = CostParams(
        size=2, horizon=2, weights=dict(enumerate(weights)), free_flow_cost=0.05, miss_penalty=3.0
    )
    rho = MassField.static(2, 2, dict(enumerate(masses)))
    grid = TimeGrid(2, 16)
    table = solve_value(rho, params, grid, check_resolution=False)
    points = grid.points
    n = grid.steps
    for p in all_nodes(2):
        if p.is_target:
            continue
        for i in range(n):
            value = table.values[p.index, i]
            optimal = set(table.argmins[(p.index, i)])
            for q in successors(p):
                for j in range(i + 1, n + 1):
                    total = table.cbar[(p.index, q.index)] / float(points[j] - points[i]) + table.values[q.index, j]
                    assert value <= total + 1e-12 * (1 + abs(value))
                    if (q.index, points[j]) in optimal:
                        assert total <= value + 2e-9 * (1 + abs(value))


@pytest.mark.parametrize("mode", ["grid", "analytic"])
def test_argmin_drops_a_branch_one_hundred_times_dearer(mode):
    cheap = CostParams(size=2, horizon=2, weights={i: 0.0 for i in range(4)}, free_flow_cost=0.01)
    dear = CostParams(
        size=2, horizon=2, weights={0: 0.0, 1: 0.99, 2: 0.0, 3: 0.0}, free_flow_cost=0.01
    )
    rho = MassField.static(2, 2, {1: 1})
    grid = TimeGrid(2, 16)
    origin = Node.origin(2)
    balanced = solve_value(rho, cheap, grid, mode=mode, check_resolution=False)
    skewed = solve_value(rho, dear, grid, mode=mode, check_resolution=False)
    assert skewed.cbar[(0, 1)] == pytest.approx(100 * skewed.cbar[(0, 2)])
    assert {q for q, _ in argmin_map(balanced, origin, 0)} == {Node(1, 2), Node(2, 2)}
    for t in grid.points[:-1]:
        assert {q for q, _ in argmin_map(skewed, origin, t)} == {Node(2, 2)}
