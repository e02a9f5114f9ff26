"""The ε-partition, the rounding map on switching instants and the ε-optimal map."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from mfg_switch.network.topology import Node
from mfg_switch.solver.time_grid import TimeGrid
from mfg_switch.solver.value_solver import argmin_map
from mfg_switch.solver.value_table import ValueTable
from mfg_switch.utilities.constants import DEFAULT_GRID_POINTS
from mfg_switch.utilities.errors import (
    BoundaryQuery,
    DimensionMismatch,
    ErrorMessages,
    OutOfRange,
)
from mfg_switch.utilities.exact import Number, as_time

logger = logging.getLogger(__name__)

EpsTarget = Tuple[Node, Fraction]


@dataclass(frozen=True)
class EpsPartition:
    """Uniform partition 0, ε, ..., T with ε = T / m."""

    horizon: Fraction
    m: int

    def __post_init__(self):
        object.__setattr__(self, "horizon", as_time(self.horizon))
        if self.horizon <= 0:
            raise ValueError(f"Horizon must be positive, got {self.horizon}")
        if self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m}")

    @property
    def epsilon(self) -> Fraction:
        return self.horizon / self.m

    @property
    def nodes(self) -> Tuple[Fraction, ...]:
        return tuple(self.epsilon * k for k in range(self.m + 1))

    def contains(self, t: Number) -> bool:
        ratio = as_time(t) / self.epsilon
        return ratio.denominator == 1 and 0 <= ratio <= self.m

    def default_divisor(self) -> int:
        return math.ceil(DEFAULT_GRID_POINTS / self.m)

    def grid(self, divisor: Optional[int] = None) -> TimeGrid:
        """Time grid with δ = ε / divisor; ``None`` picks δ close to T/256."""
        divisor = divisor or self.default_divisor()
        if divisor < 1:
            raise ValueError(f"grid_divisor must be positive, got {divisor}")
        return TimeGrid(self.horizon, self.m * divisor)

    def check_grid(self, grid: TimeGrid) -> None:
        if grid.horizon != self.horizon or grid.steps % self.m:
            raise DimensionMismatch(
                ErrorMessages.format_error(
                    ErrorMessages.MISMATCH,
                    f"grid of {grid.steps} steps on [0, {grid.horizon}]",
                    f"partition of {self.m} cells on [0, {self.horizon}]",
                )
            )


def round_instant(tau: Number, part: EpsPartition) -> FrozenSet[Fraction]:
    """Nearest partition node(s) of ``tau``; both neighbours at an exact midpoint."""
    tau = as_time(tau)
    if not 0 <= tau <= part.horizon:
        raise OutOfRange(
            ErrorMessages.format_error(ErrorMessages.OUT_OF_RANGE, tau, part.horizon)
        )
    eps = part.epsilon
    quotient = tau / eps
    lower = math.floor(quotient)
    remainder = quotient - lower
    if remainder == 0 or 2 * remainder < 1:
        picks = {lower}
    elif 2 * remainder == 1:
        picks = {lower, lower + 1}
    else:
        picks = {lower + 1}
    return frozenset(min(k * eps, part.horizon) for k in picks)


def eps_targets(
    table: ValueTable, part: EpsPartition, p: Node, s: Number
) -> Tuple[FrozenSet[EpsTarget], int]:
    """ε-optimal pairs at ``(p, s)`` and how many instants had to be lifted.

    A rounded instant that does not lie after ``s`` is moved to the next
    partition node, so every realized switch takes positive time.
    """
    s = as_time(s)
    if p.is_target or s >= part.horizon:
        raise BoundaryQuery(ErrorMessages.format_error(ErrorMessages.BOUNDARY, p, s))
    part.check_grid(table.grid)
    eps = part.epsilon
    step = table.grid.step

    by_successor: Dict[Node, List[Fraction]] = {}
    for succ, tau in argmin_map(table, p, s):
        by_successor.setdefault(succ, []).append(tau)

    rounded: Set[EpsTarget] = set()
    for succ, taus in by_successor.items():
        taus.sort()
        for tau in taus:
            rounded.update((succ, r) for r in round_instant(tau, part))
        for low, high in _adjacent_runs(taus, step):
            first = math.floor(low / eps)
            last = math.ceil(high / eps)
            rounded.update((succ, k * eps) for k in range(first, last + 1))

    lifted = 0
    targets: Set[EpsTarget] = set()
    for succ, r in rounded:
        if r <= s:
            lifted += 1
            r = min(s + eps, part.horizon)
        targets.add((succ, r))
    if lifted:
        logger.warning("Lifted %d rounded instants past decision time %s", lifted, s)
    return frozenset(targets), lifted


def _adjacent_runs(taus: List[Fraction], step: Fraction) -> List[Tuple[Fraction, Fraction]]:
    """Runs of at least two consecutive grid instants."""
    if any((tau / step).denominator != 1 for tau in taus):
        return []
    runs = []
    start = previous = taus[0]
    for tau in taus[1:]:
        if tau - previous != step:
            if previous > start:
                runs.append((start, previous))
            start = tau
        previous = tau
    if previous > start:
        runs.append((start, previous))
    return runs


def eps_argmin_map(
    table: ValueTable, part: EpsPartition, p: Node, s: Number
) -> FrozenSet[EpsTarget]:
    """Rounded argmin pairs at the decision node ``(p, s)``."""
    targets, _ = eps_targets(table, part, p, s)
    return targets
