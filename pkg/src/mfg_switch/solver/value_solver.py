"""Backward dynamic programming for the value function and its argmin map."""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, List, Literal, Set, Tuple

import networkx as nx
import numpy as np

from mfg_switch.costs.cost_model import CostParams, EdgeCongestion, terminal_cost
from mfg_switch.network.topology import (
    Node,
    all_nodes,
    lattice_graph,
    levels_backward,
    successors,
)
from mfg_switch.profiles.mass_field import MassField
from mfg_switch.solver.time_grid import TimeGrid
from mfg_switch.solver.value_table import ArgminKey, ArgminPair, ValueTable
from mfg_switch.utilities.constants import RESOLUTION_TOL, TIE_RELATIVE_TOL
from mfg_switch.utilities.errors import (
    BoundaryQuery,
    DegenerateCost,
    DimensionMismatch,
    ErrorMessages,
    GridTooCoarse,
    NonConvergence,
)
from mfg_switch.utilities.exact import Number, as_time

logger = logging.getLogger(__name__)

Argmins = Dict[ArgminKey, Tuple[ArgminPair, ...]]


def tie_tolerance(value):
    return TIE_RELATIVE_TOL * (1 + np.abs(value))


def solve_value(
    rho: MassField,
    params: CostParams,
    grid: TimeGrid,
    mode: Literal["grid", "analytic"] = "grid",
    check_resolution: bool = True,
) -> ValueTable:
    """Solve the dynamic programming system on ``grid`` for the field ``rho``.

    Nodes are processed from the target down to the origin. In grid mode the
    switching instant ranges over the grid points of ]t, T]. In analytic mode
    the instant is continuous: every chain ends with a switch at T, so its
    cost is the squared sum of ``sqrt(cbar)`` over T - t, and the value is the
    cheapest chain to any end node plus that node's terminal cost.

    Raises:
        DimensionMismatch: field, parameters and grid disagree on N or T.
        GridTooCoarse: an optimal switch reachable from t = 0 sits one step
            after its decision time and halving the step moves the value.
        DegenerateCost: analytic mode met an edge with a zero congestion average.
        NonConvergence: an analytic chain cost is not finite.
    """
    if rho.size != params.size or rho.horizon != params.horizon:
        raise DimensionMismatch(
            ErrorMessages.format_error(
                ErrorMessages.MISMATCH,
                (rho.size, rho.horizon),
                (params.size, params.horizon),
            )
        )
    if grid.horizon != params.horizon:
        raise DimensionMismatch(
            ErrorMessages.format_error(ErrorMessages.MISMATCH, grid.horizon, params.horizon)
        )
    congestion = EdgeCongestion.from_field(rho, params)
    if mode == "analytic":
        return _solve_analytic(params, grid, congestion)
    if mode != "grid":
        raise ValueError(f"Unknown solver mode {mode!r}")

    values, argmins, single_valued = _solve_grid(params, grid, congestion)
    reachable = _reachable_cells(argmins, params, grid)
    if check_resolution:
        _check_resolution(values, argmins, reachable, params, grid, congestion)
    gaps = [
        tau - grid.time_of(tick)
        for node, tick in reachable
        for _, tau in argmins[(node, tick)]
    ]
    table = ValueTable(
        size=params.size,
        grid=grid,
        mode="grid",
        values=values,
        argmins=argmins,
        cbar=dict(congestion.cbar),
        min_gap=min(gaps) if gaps else None,
        phi_single_valued=single_valued,
    )
    logger.debug(
        "Solved value table on %d steps, min gap %s", grid.steps, table.min_gap
    )
    return table


def _boundary_values(params: CostParams, grid: TimeGrid) -> np.ndarray:
    n = grid.steps
    values = np.full((2**params.size, n + 1), np.nan)
    target = params.target
    values[target.index] = [terminal_cost(target, t, params) for t in grid.points]
    for p in all_nodes(params.size):
        if not p.is_target:
            values[p.index, n] = terminal_cost(p, params.horizon, params)
    return values


def _solve_grid(
    params: CostParams, grid: TimeGrid, congestion: EdgeCongestion
) -> Tuple[np.ndarray, Argmins, bool]:
    n = grid.steps
    points = grid.points
    gaps = np.array([float(grid.step * k) for k in range(n + 1)])
    ticks = np.arange(n + 1)
    offsets = ticks[None, :] - ticks[:, None]
    feasible = offsets > 0
    gap_matrix = gaps[np.where(feasible, offsets, 0)]

    values = _boundary_values(params, grid)
    argmins: Argmins = {}
    single_valued = True
    for level in levels_backward(params.size)[1:]:
        for p in level:
            candidates = []
            for q in sorted(successors(p)):
                switching = np.divide(
                    congestion[(p, q)],
                    gap_matrix,
                    out=np.full(gap_matrix.shape, np.inf),
                    where=feasible,
                )
                candidates.append((q, (switching + values[q.index][None, :])[:n]))
            best = np.min([cand.min(axis=1) for _, cand in candidates], axis=0)
            values[p.index, :n] = best
            bound = best + tie_tolerance(best)

            cells: Dict[int, List[Tuple[int, int]]] = {i: [] for i in range(n)}
            for q, cand in candidates:
                hits = cand <= bound[:, None]
                if np.any(hits.sum(axis=1) > 1):
                    single_valued = False
                for i, j in zip(*np.nonzero(hits)):
                    cells[int(i)].append((q.index, int(j)))
            for i, pairs in cells.items():
                argmins[(p.index, i)] = tuple(
                    (succ, points[j]) for succ, j in sorted(pairs)
                )
    return values, argmins, single_valued


def _reachable_cells(
    argmins: Argmins, params: CostParams, grid: TimeGrid
) -> Set[Tuple[int, int]]:
    """Cells visited by optimal trajectories started at t = 0 from any node."""
    stack = [(p.index, 0) for p in all_nodes(params.size) if not p.is_target]
    seen: Set[Tuple[int, int]] = set()
    target = params.target.index
    while stack:
        cell = stack.pop()
        if cell in seen:
            continue
        seen.add(cell)
        for succ, tau in argmins[cell]:
            if succ != target and tau < params.horizon:
                stack.append((succ, grid.tick_of(tau)))
    return seen


def _check_resolution(
    values: np.ndarray,
    argmins: Argmins,
    reachable: Set[Tuple[int, int]],
    params: CostParams,
    grid: TimeGrid,
    congestion: EdgeCongestion,
) -> None:
    flagged = sorted(
        (node, tick)
        for node, tick in reachable
        if tick + 1 < grid.steps
        and any(tau == grid.time_of(tick + 1) for _, tau in argmins[(node, tick)])
    )
    if not flagged:
        return
    logger.info("Re-solving %d cells at half the grid step", len(flagged))
    fine, _, _ = _solve_grid(params, grid.refined(2), congestion)
    for node, tick in flagged:
        coarse_value = values[node, tick]
        change = abs(coarse_value - fine[node, 2 * tick])
        if change > RESOLUTION_TOL * (1 + abs(coarse_value)):
            raise GridTooCoarse(
                ErrorMessages.format_error(
                    ErrorMessages.GRID_TOO_COARSE,
                    grid.step,
                    Node(node, params.size),
                    grid.time_of(tick),
                    change,
                )
            )


def root_distances(params: CostParams, congestion: EdgeCongestion) -> Dict[int, Dict[int, float]]:
    """Smallest sum of ``sqrt(cbar)`` from every node to each node that dominates it."""
    graph = lattice_graph(params.size)

    def root_cost(u: int, v: int, _: dict) -> float:
        return math.sqrt(congestion.cbar[(u, v)])

    return {
        p: nx.single_source_dijkstra_path_length(graph, p, weight=root_cost)
        for p in graph.nodes
    }


def _solve_analytic(
    params: CostParams, grid: TimeGrid, congestion: EdgeCongestion
) -> ValueTable:
    degenerate = congestion.degenerate_edges()
    if degenerate:
        raise DegenerateCost(
            ErrorMessages.format_error(ErrorMessages.DEGENERATE, congestion.cbar[degenerate[0]])
        )
    n = grid.steps
    points = grid.points
    horizon = params.horizon
    spans = np.array([float(horizon - t) for t in points[:n]])
    distances = root_distances(params, congestion)

    @lru_cache(maxsize=None)
    def first_steps(node: int, end: int) -> Tuple[Tuple[int, float], ...]:
        # successors opening a cheapest chain, with their share of the remaining time
        total = distances[node][end]
        steps = []
        for succ in sorted(successors(Node(node, params.size))):
            rest = distances[succ.index].get(end)
            if rest is None:
                continue
            root = math.sqrt(congestion.cbar[(node, succ.index)])
            if root + rest <= total + TIE_RELATIVE_TOL * (1 + total):
                steps.append((succ.index, root / total))
        return tuple(steps)

    @lru_cache(maxsize=None)
    def smallest_root(node: int, end: int) -> float:
        if node == end:
            return math.inf
        total = distances[node][end]
        return min(
            min(share * total, smallest_root(succ, end))
            for succ, share in first_steps(node, end)
        )

    values = _boundary_values(params, grid)
    argmins: Argmins = {}
    single_valued = True
    min_gap = None
    for p in all_nodes(params.size):
        if p.is_target:
            continue
        ends = sorted(q for q in distances[p.index] if q != p.index)
        lengths = np.array([distances[p.index][q] for q in ends])
        finals = np.array([terminal_cost(Node(q, params.size), horizon, params) for q in ends])
        with np.errstate(over="ignore"):
            totals = lengths[:, None] ** 2 / spans[None, :] + finals[:, None]
        if not np.all(np.isfinite(totals)):
            raise NonConvergence(
                ErrorMessages.format_error(
                    ErrorMessages.NON_CONVERGENCE, points[0], horizon, f"non-finite chain cost at node {p}"
                )
            )
        best = totals.min(axis=0)
        values[p.index, :n] = best
        optimal = totals <= (best + tie_tolerance(best))[None, :]

        for i in range(n):
            pairs = set()
            for k in np.nonzero(optimal[:, i])[0]:
                end = ends[k]
                for succ, share in first_steps(p.index, end):
                    tau = horizon if succ == end else _instant(float(points[i]) + spans[i] * share, horizon)
                    pairs.add((succ, tau))
            ordered = tuple(sorted(pairs))
            if len(ordered) != len({succ for succ, _ in ordered}):
                single_valued = False
            argmins[(p.index, i)] = ordered

        for k in np.nonzero(optimal[:, 0])[0]:
            end = ends[k]
            gap = as_time(float(horizon) * smallest_root(p.index, end) / distances[p.index][end])
            min_gap = gap if min_gap is None else min(min_gap, gap)
    return ValueTable(
        size=params.size,
        grid=grid,
        mode="analytic",
        values=values,
        argmins=argmins,
        cbar=dict(congestion.cbar),
        min_gap=min_gap,
        phi_single_valued=single_valued,
    )


def _instant(value: float, horizon: Fraction) -> Fraction:
    return horizon if value >= float(horizon) else as_time(value)


def argmin_map(table: ValueTable, p: Node, t: Number) -> FrozenSet[Tuple[Node, Fraction]]:
    """All optimal (successor, switching instant) pairs at ``(p, t)``."""
    t = as_time(t)
    if p.is_target or t >= table.grid.horizon:
        raise BoundaryQuery(ErrorMessages.format_error(ErrorMessages.BOUNDARY, p, t))
    tick = table.grid.tick_of(t)
    return frozenset(
        (Node(succ, table.size), tau) for succ, tau in table.argmins[(p.index, tick)]
    )
