import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Set, Tuple

from pydantic import BaseModel

from mfg_switch.discretization.partition import EpsPartition, eps_targets, round_instant
from mfg_switch.network.topology import Node, successors
from mfg_switch.profiles.mass_field import MassField
from mfg_switch.solver.value_solver import argmin_map
from mfg_switch.solver.value_table import ValueTable
from mfg_switch.utilities.constants import DEFAULT_MAX_PATHS
from mfg_switch.utilities.errors import ErrorMessages, NotAPath, PathExplosion
from mfg_switch.utilities.exact import as_time

logger = logging.getLogger(__name__)

Decision = Tuple[Node, Fraction, Node, Fraction]


@dataclass(frozen=True)
class EpsPath:
    """A switching path whose instants lie on the ε-partition.

    ``instants[0]`` is the decision time the path starts from and
    ``instants[i]`` is the instant ``nodes[i]`` is entered.
    """

    nodes: Tuple[Node, ...]
    instants: Tuple[Fraction, ...]
    horizon: Fraction

    def __post_init__(self):
        object.__setattr__(self, "instants", tuple(as_time(t) for t in self.instants))
        object.__setattr__(self, "horizon", as_time(self.horizon))
        if not self.nodes or len(self.nodes) != len(self.instants):
            raise NotAPath("An ε-path needs one instant per node")
        for previous, current in zip(self.nodes, self.nodes[1:]):
            if current not in successors(previous):
                raise NotAPath(
                    ErrorMessages.format_error(
                        ErrorMessages.NOT_SUCCESSOR, current, previous
                    )
                )
        if any(b <= a for a, b in zip(self.instants, self.instants[1:])):
            raise NotAPath(f"Instants must increase strictly: {self.instants}")
        if self.instants[0] < 0 or self.instants[-1] > self.horizon:
            raise NotAPath(f"Instants must lie in [0, {self.horizon}]")
        last = self.nodes[-1]
        if not last.is_target and self.instants[-1] != self.horizon:
            raise NotAPath("An ε-path that misses targets must end at the horizon")

    @property
    def start(self) -> Node:
        return self.nodes[0]

    def decisions(self) -> List[Decision]:
        """(node, decision time, successor, switching instant) per switch."""
        return [
            (self.nodes[i], self.instants[i], self.nodes[i + 1], self.instants[i + 1])
            for i in range(len(self.nodes) - 1)
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nodes": [p.index for p in self.nodes],
            "bits": [p.label for p in self.nodes],
            "instants": [str(t) for t in self.instants],
        }


def enumerate_eps_paths(
    table: ValueTable,
    part: EpsPartition,
    initial: MassField,
    max_paths: int = DEFAULT_MAX_PATHS,
) -> List[EpsPath]:
    """Depth-first expansion of the ε-optimal map from every loaded node at t = 0.

    Raises:
        PathExplosion: more than ``max_paths`` paths would be produced.
    """
    horizon = part.horizon
    paths: List[EpsPath] = []

    def expand(nodes: Tuple[Node, ...], instants: Tuple[Fraction, ...]) -> None:
        node, s = nodes[-1], instants[-1]
        if node.is_target or s >= horizon:
            if len(paths) >= max_paths:
                raise PathExplosion(
                    ErrorMessages.format_error(ErrorMessages.PATH_EXPLOSION, max_paths)
                )
            paths.append(EpsPath(nodes, instants, horizon))
            return
        targets, _ = eps_targets(table, part, node, s)
        for succ, tau in sorted(targets):
            expand(nodes + (succ,), instants + (tau,))

    for index in sorted(initial.initial_masses()):
        expand((Node(index, initial.size),), (Fraction(0),))
    logger.debug("Enumerated %d ε-optimal paths", len(paths))
    return paths


class RoundingDiagnostics(BaseModel):
    """Effect of taking decisions at rounded rather than optimal instants."""

    max_rounding_shift: float = 0.0
    changed_decisions: int = 0
    lifted_instants: int = 0


def rounding_diagnostics(
    table: ValueTable, part: EpsPartition, paths: List[EpsPath]
) -> RoundingDiagnostics:
    shift = Fraction(0)
    changed: Set[Tuple[int, Fraction]] = set()
    lifted: Set[Tuple[int, Fraction]] = set()
    for path in paths:
        for p, s, q, rounded in path.decisions():
            raw = sorted(tau for succ, tau in argmin_map(table, p, s) if succ == q)
            if not raw:
                continue
            shift = max(shift, min(abs(rounded - tau) for tau in raw))
            if rounded == min(s + part.epsilon, part.horizon) and all(
                rounded not in round_instant(tau, part) for tau in raw
            ):
                lifted.add((p.index, s))
            if q.is_target or rounded >= part.horizon or table.mode != "grid":
                continue
            at_rounded = {succ for succ, _ in argmin_map(table, q, rounded)}
            for tau in raw:
                if tau < part.horizon and tau != rounded:
                    if {succ for succ, _ in argmin_map(table, q, tau)} != at_rounded:
                        changed.add((q.index, rounded))
    return RoundingDiagnostics(
        max_rounding_shift=float(shift),
        changed_decisions=len(changed),
        lifted_instants=len(lifted),
    )
