"""Closed-form solutions for the reciprocal-gap family.

Along a fixed node path the remaining cost from time t is
``sum(cbar_i / (tau_i - tau_{i-1}))`` with ``tau_0 = t``. The last switch
always happens at T because both the switching cost and the terminal cost
decrease in its instant. The gaps are then proportional to ``sqrt(cbar_i)``
and the value is ``(sum sqrt(cbar_i))**2 / (T - t)``.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from typing import Sequence, Tuple

from mfg_switch.costs.cost_model import CostParams, EdgeCongestion, terminal_cost
from mfg_switch.network.topology import Node, successors
from mfg_switch.profiles.mass_field import MassField
from mfg_switch.utilities.errors import (
    BadTimes,
    DegenerateCost,
    ErrorMessages,
    NonConvergence,
    NotAPath,
)
from mfg_switch.utilities.exact import Number, as_time


@dataclass(frozen=True)
class ChainSolution:
    nodes: Tuple[Node, ...]
    instants: Tuple[float, ...]
    value: float


def phi_two_step(cbar_in: float, cbar_out: float, t: Number, horizon: Number) -> float:
    """Optimal first instant on a two-edge chain whose second switch is at T."""
    for cbar in (cbar_in, cbar_out):
        if cbar <= 0:
            raise DegenerateCost(
                ErrorMessages.format_error(ErrorMessages.DEGENERATE, cbar)
            )
    t, horizon = float(t), float(horizon)
    if t >= horizon:
        raise BadTimes(ErrorMessages.format_error(ErrorMessages.BAD_TIMES, t, horizon, horizon))
    ratio = math.sqrt(cbar_in / cbar_out)
    return (ratio * horizon + t) / (ratio + 1)


def split_remaining_time(
    cbars: Sequence[float], t: float, horizon: float
) -> Tuple[Tuple[float, ...], float]:
    """Switching instants and cost of a chain whose last switch lands at T.

    Raises:
        NonConvergence: the instants or the value are not finite floats.
    """
    span = horizon - t
    try:
        roots = [math.sqrt(c) for c in cbars]
        total = sum(roots)
        instants = tuple(t + span * partial / total for partial in accumulate(roots))
        value = total**2 / span
    except (ArithmeticError, ValueError) as e:
        raise NonConvergence(
            ErrorMessages.format_error(ErrorMessages.NON_CONVERGENCE, t, horizon, e), e
        ) from e
    if not (math.isfinite(value) and all(math.isfinite(x) for x in instants)):
        raise NonConvergence(
            ErrorMessages.format_error(
                ErrorMessages.NON_CONVERGENCE, t, horizon, "non-finite chain cost"
            )
        )
    return instants[:-1] + (horizon,), value


def phi_chain(
    path: Sequence[Node], rho: MassField, params: CostParams, t: Number
) -> ChainSolution:
    """Optimal switching instants and value along a fixed path ending at the target.

    Raises:
        NotAPath: the sequence skips an edge or stops short of the target.
        DegenerateCost: an edge on the path has a zero congestion average.
        NonConvergence: the chain cost overflows.
    """
    path = tuple(path)
    if not path or not path[-1].is_target:
        raise NotAPath("Path must end at the target node")
    for p, q in zip(path, path[1:]):
        if q not in successors(p):
            raise NotAPath(ErrorMessages.format_error(ErrorMessages.NOT_SUCCESSOR, q, p))
    t = as_time(t)
    if len(path) == 1:
        return ChainSolution(path, (), terminal_cost(path[0], t, params))
    if not 0 <= t < params.horizon:
        raise BadTimes(
            ErrorMessages.format_error(ErrorMessages.OUT_OF_RANGE, t, params.horizon)
        )
    congestion = EdgeCongestion.from_field(rho, params)
    return chain_from_cbars(path, [congestion[e] for e in zip(path, path[1:])], t, params.horizon)


def chain_from_cbars(
    path: Tuple[Node, ...], cbars: Sequence[float], t: Fraction, horizon: Fraction
) -> ChainSolution:
    for cbar in cbars:
        if cbar <= 0:
            raise DegenerateCost(ErrorMessages.format_error(ErrorMessages.DEGENERATE, cbar))
    instants, value = split_remaining_time(list(cbars), float(t), float(horizon))
    return ChainSolution(path, instants, value)
