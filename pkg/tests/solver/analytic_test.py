import math
from fractions import Fraction

import numpy as np
import pytest

from mfg_switch.costs.cost_model import CostParams
from mfg_switch.network.topology import Node
from mfg_switch.profiles.mass_field import MassField
from mfg_switch.solver.analytic import chain_from_cbars, phi_chain, phi_two_step
from mfg_switch.utilities.errors import BadTimes, DegenerateCost, NonConvergence, NotAPath


def two_step_cost(cbar_in, cbar_out, t, tau, horizon):
    return cbar_in / (tau - t) + cbar_out / (horizon - tau)


def test_two_step_matches_fine_grid_minimization():
    rng = np.random.default_rng(7)
    horizon = 2.0
    for _ in range(100):
        cbar_in, cbar_out = rng.uniform(0.05, 5.0, size=2)
        t = float(rng.uniform(0.0, 1.9))
        taus = np.linspace(t, horizon, 20001)[1:-1]
        costs = two_step_cost(cbar_in, cbar_out, t, taus, horizon)
        step = taus[1] - taus[0]
        assert abs(phi_two_step(cbar_in, cbar_out, t, horizon) - taus[np.argmin(costs)]) <= step


def test_two_step_slope_in_unit_interval():
    rng = np.random.default_rng(11)
    h = 1e-4
    for _ in range(50):
        cbar_in, cbar_out = rng.uniform(0.05, 5.0, size=2)
        t = float(rng.uniform(0.0, 1.5))
        slope = (phi_two_step(cbar_in, cbar_out, t + h, 2) - phi_two_step(cbar_in, cbar_out, t, 2)) / h
        assert 1e-6 < slope < 1 - 1e-6


def test_two_step_errors():
    with pytest.raises(DegenerateCost):
        phi_two_step(0.0, 1.0, 0, 2)
    with pytest.raises(BadTimes):
        phi_two_step(1.0, 1.0, 2, 2)


@pytest.mark.parametrize(
    "cbars",
    [(1.0, 1.0, 1.0), (0.3, 2.0, 0.7), (5.0, 0.1, 1.0, 0.4)],
)
def test_chain_value_splits_remaining_time_by_root_costs(cbars):
    size = len(cbars)
    path = tuple(Node((1 << k) - 1, size) for k in range(size + 1))
    t = Fraction(1, 4)
    solution = chain_from_cbars(path, cbars, t, Fraction(2))
    roots = [math.sqrt(c) for c in cbars]
    assert solution.value == pytest.approx(sum(roots) ** 2 / 1.75, rel=1e-9)
    assert solution.instants[-1] == 2.0
    assert solution.instants[0] == pytest.approx(0.25 + 1.75 * roots[0] / sum(roots), abs=1e-9)


def test_three_switch_first_instant_slope_in_unit_interval():
    path = tuple(Node((1 << k) - 1, 3) for k in range(4))
    h = 1e-4
    first = chain_from_cbars(path, (0.4, 1.3, 0.9), Fraction(1, 2), Fraction(2)).instants[0]
    moved = chain_from_cbars(path, (0.4, 1.3, 0.9), Fraction(1, 2) + Fraction(1, 10000), Fraction(2)).instants[0]
    slope = (moved - first) / h
    assert 1e-6 < slope < 1 - 1e-6


def test_phi_chain_on_a_field():
    params = CostParams(size=2, horizon=2, weights={0: 1.6}, free_flow_cost=0.1)
    rho = MassField.static(2, 2, {0: 1})
    path = (Node(0, 2), Node(1, 2), Node(3, 2))
    solution = phi_chain(path, rho, params, 0)
    ratio = math.sqrt(1.7 / 0.1)
    assert solution.instants[0] == pytest.approx(2 * ratio / (ratio + 1))
    assert solution.value == pytest.approx((math.sqrt(1.7) + math.sqrt(0.1)) ** 2 / 2)


def test_phi_chain_edge_cases():
    params = CostParams(size=2, horizon=2, earliness_rate=2.0)
    rho = MassField.static(2, 2, {0: 1})
    assert phi_chain((Node(3, 2),), rho, params, 1).value == pytest.approx(2.0)
    with pytest.raises(NotAPath):
        phi_chain((Node(0, 2), Node(1, 2)), rho, params, 0)
    with pytest.raises(NotAPath):
        phi_chain((Node(0, 2), Node(3, 2)), rho, params, 0)
    with pytest.raises(DegenerateCost):
        phi_chain((Node(1, 2), Node(3, 2)), rho, params, 0)


def test_long_chain_splits_time_in_closed_form():
    size = 6
    path = tuple(Node((1 << k) - 1, size) for k in range(size + 1))
    cbars = (5.0, 0.1, 1.0, 0.4, 2.5, 0.05)
    solution = chain_from_cbars(path, cbars, Fraction(0), Fraction(2))
    roots = np.sqrt(cbars)
    gaps = np.diff((0.0,) + solution.instants)
    assert np.allclose(gaps / roots, gaps[0] / roots[0], rtol=1e-12)
    assert solution.value == pytest.approx(roots.sum() ** 2 / 2, rel=1e-12)


def test_four_edge_chain_on_a_field():
    params = CostParams(size=4, horizon=2, free_flow_cost=0.1)
    rho = MassField.static(4, 2, {0: 1})
    path = tuple(Node((1 << k) - 1, 4) for k in range(5))
    solution = phi_chain(path, rho, params, Fraction(1, 2))
    assert len(solution.instants) == 4
    assert all(a < b for a, b in zip((0.5,) + solution.instants, solution.instants))
    assert solution.instants[-1] == 2.0
    assert solution.value == pytest.approx((math.sqrt(1.1) + math.sqrt(0.1) * 3) ** 2 / 1.5)


def test_overflowing_chain_cost_is_non_convergence():
    path = (Node(0, 2), Node(1, 2), Node(3, 2))
    with pytest.raises(NonConvergence):
        chain_from_cbars(path, (1e308, 1e308), Fraction(0), Fraction(2))
