"""Mass evolutions generated by ε-optimal paths and their convexification."""

from collections import defaultdict
from fractions import Fraction
from typing import Dict, List, Set, Tuple

from mfg_switch.flow.decision_plan import DecisionKey, DecisionPlan, TargetKey
from mfg_switch.flow.eps_paths import EpsPath
from mfg_switch.profiles.mass_field import MassField
from mfg_switch.profiles.step_profile import StepProfile
from mfg_switch.utilities.errors import BadCoefficients, ErrorMessages
from mfg_switch.utilities.exact import Number

Interval = Tuple[Fraction, Fraction, Number]


def _occupation(
    path: EpsPath, weight: Number
) -> Tuple[Dict[int, List[Interval]], Dict[int, Number]]:
    """Intervals held by each node of ``path`` and the mass it ends with at T.

    Node i holds ``[instants[i], instants[i + 1])``; the last node holds
    ``[instants[-1], T)`` and keeps the mass at T. A switch at T therefore
    leaves the previous node empty at T.
    """
    intervals: Dict[int, List[Interval]] = defaultdict(list)
    ends = list(path.instants[1:]) + [path.horizon]
    for node, start, end in zip(path.nodes, path.instants, ends):
        if start < end:
            intervals[node.index].append((start, end, weight))
    return intervals, {path.nodes[-1].index: weight}


def _assemble(
    size: int,
    horizon: Fraction,
    intervals: Dict[int, List[Interval]],
    terminal: Dict[int, Number],
) -> MassField:
    return MassField(
        size,
        horizon,
        tuple(
            StepProfile.from_intervals(horizon, intervals.get(i, []), terminal.get(i, 0))
            for i in range(2**size)
        ),
    )


def extremal_evolution(path: EpsPath, initial_node_mass: Number) -> MassField:
    """The field produced when all of ``initial_node_mass`` follows ``path``."""
    intervals, terminal = _occupation(path, initial_node_mass)
    return _assemble(path.start.size, path.horizon, intervals, terminal)


def combine(plan: DecisionPlan, paths: List[EpsPath], initial: MassField) -> MassField:
    """Convexified field: each path carries its start mass times its coefficient product.

    Raises:
        BadCoefficients: a coefficient is negative, a decision node's weights
            do not sum to one, or positive weight sits on a target no path uses.
    """
    plan.validate()
    available: Dict[DecisionKey, Set[TargetKey]] = {
        key: set(targets) for key, targets in DecisionPlan.decision_targets(paths).items()
    }
    for key, targets in plan.coefficients.items():
        for target, value in targets.items():
            if value > 0 and target not in available.get(key, set()):
                raise BadCoefficients(
                    ErrorMessages.format_error(
                        ErrorMessages.BAD_COEFFICIENTS,
                        key[0],
                        key[1],
                        f"weight on unreachable target {target}",
                    )
                )

    masses = initial.initial_masses()
    intervals: Dict[int, List[Interval]] = defaultdict(list)
    terminal: Dict[int, Number] = defaultdict(int)
    for path in paths:
        weight = masses.get(path.start.index, 0)
        for p, s, q, tau in path.decisions():
            if weight != 0 and (p.index, s) not in plan.coefficients:
                raise BadCoefficients(
                    ErrorMessages.format_error(
                        ErrorMessages.BAD_COEFFICIENTS, p.index, s, "no coefficients"
                    )
                )
            weight = weight * plan.coefficient(p, s, q, tau)
        if weight == 0:
            continue
        path_intervals, path_terminal = _occupation(path, weight)
        for node, pieces in path_intervals.items():
            intervals[node].extend(pieces)
        for node, value in path_terminal.items():
            terminal[node] += value
    return _assemble(initial.size, initial.horizon, intervals, terminal)
