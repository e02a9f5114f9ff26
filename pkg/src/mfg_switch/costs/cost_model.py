"""Reciprocal-gap congestion costs and the two-case terminal cost."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from mfg_switch.network.topology import Node, SwitchPath, all_nodes, successors
from mfg_switch.profiles.mass_field import MassField
from mfg_switch.utilities.constants import (
    DEFAULT_EARLINESS_RATE,
    DEFAULT_MISS_PENALTY,
    DEFAULT_WEIGHT,
)
from mfg_switch.utilities.errors import (
    BadTimes,
    DimensionMismatch,
    ErrorMessages,
    InvalidTerminalState,
    NotAdmissible,
)
from mfg_switch.utilities.exact import Number, as_time

Edge = Tuple[int, int]
SwitchCost = Callable[[Node, Node, Fraction, Fraction, MassField], float]


class CostParams(BaseModel):
    model_config = ConfigDict(
        arbitrary_types_allowed=True, frozen=True, extra="forbid", allow_inf_nan=False
    )

    size: int = Field(..., ge=1, description="Number of targets N")
    horizon: Fraction = Field(..., description="Final time T > 0")
    weights: Dict[int, float] = Field(
        default_factory=dict,
        description="Congestion weight a(p) per node id; missing ids use the default",
    )
    earliness_rate: float = Field(
        default=DEFAULT_EARLINESS_RATE,
        gt=0,
        description="Cost per unit of time left when the target node is reached",
    )
    miss_penalty: float = Field(
        default=DEFAULT_MISS_PENALTY,
        ge=0,
        description="Cost per unvisited target at the horizon",
    )
    free_flow_cost: float = Field(
        default=0.0,
        ge=0,
        description="Congestion-free part of every switch average",
    )

    @field_validator("horizon", mode="before")
    @classmethod
    def _exact_horizon(cls, value):
        horizon = as_time(value)
        if horizon <= 0:
            raise ValueError(f"Horizon must be positive, got {horizon}")
        return horizon

    @model_validator(mode="after")
    def _check_weights(self):
        for index, weight in self.weights.items():
            if not 0 <= index < 2**self.size:
                raise ValueError(f"Weight given for unknown node id {index}")
            if weight < 0:
                raise ValueError(f"Weight of node {index} is negative")
        return self

    @property
    def target(self) -> Node:
        return Node.target(self.size)

    def weight(self, node: Node) -> float:
        return self.weights.get(node.index, DEFAULT_WEIGHT)

    def edges(self) -> List[Tuple[Node, Node]]:
        return [(p, q) for p in all_nodes(self.size) for q in sorted(successors(p))]


@dataclass(frozen=True)
class EdgeCongestion:
    """C̄ per admissible edge for one fixed mass field."""

    cbar: Dict[Edge, float]

    @classmethod
    def from_field(cls, rho: MassField, params: CostParams) -> "EdgeCongestion":
        _check_field(rho, params)
        integrals = rho.integrals()
        horizon = params.horizon
        return cls(
            {
                (p.index, q.index): params.free_flow_cost
                + float(
                    params.weight(p) * integrals[p.index] / horizon
                    + params.weight(q) * integrals[q.index] / horizon
                )
                for p, q in params.edges()
            }
        )

    def __getitem__(self, edge: Tuple[Node, Node]) -> float:
        p, q = edge
        return self.cbar[(p.index, q.index)]

    def degenerate_edges(self) -> List[Edge]:
        return sorted(edge for edge, value in self.cbar.items() if value <= 0)


def _check_field(rho: MassField, params: CostParams) -> None:
    if rho.size != params.size or rho.horizon != params.horizon:
        raise DimensionMismatch(
            ErrorMessages.format_error(
                ErrorMessages.MISMATCH,
                (rho.size, rho.horizon),
                (params.size, params.horizon),
            )
        )


def edge_cbar(p: Node, q: Node, rho: MassField, params: CostParams) -> float:
    if q not in successors(p):
        raise NotAdmissible(ErrorMessages.format_error(ErrorMessages.NOT_SUCCESSOR, q, p))
    return EdgeCongestion.from_field(rho, params)[(p, q)]


def switch_cost(
    p: Node,
    q: Node,
    t: Number,
    tau: Number,
    rho: MassField,
    params: CostParams,
    congestion: Optional[EdgeCongestion] = None,
) -> float:
    """C(p, q, t, τ, ρ) = C̄(p, q, ρ) / (τ - t)."""
    if q not in successors(p):
        raise NotAdmissible(ErrorMessages.format_error(ErrorMessages.NOT_SUCCESSOR, q, p))
    t, tau = as_time(t), as_time(tau)
    if not 0 <= t < tau <= params.horizon:
        raise BadTimes(
            ErrorMessages.format_error(ErrorMessages.BAD_TIMES, t, tau, params.horizon)
        )
    congestion = congestion or EdgeCongestion.from_field(rho, params)
    return congestion[(p, q)] / float(tau - t)


def terminal_cost(p: Node, t: Number, params: CostParams) -> float:
    t = as_time(t)
    if not 0 <= t <= params.horizon:
        raise BadTimes(
            ErrorMessages.format_error(ErrorMessages.OUT_OF_RANGE, t, params.horizon)
        )
    if p.is_target:
        return params.earliness_rate * float(params.horizon - t)
    if t == params.horizon:
        return params.miss_penalty * p.zeros
    raise InvalidTerminalState(
        ErrorMessages.format_error(ErrorMessages.INVALID_TERMINAL, p, t, params.horizon)
    )


def path_cost(path: SwitchPath, rho: MassField, params: CostParams) -> float:
    """Total cost of a control: every switch plus the terminal cost."""
    congestion = EdgeCongestion.from_field(rho, params)
    total = 0.0
    for (p, t), (q, tau) in zip(
        zip(path.nodes, path.times), zip(path.nodes[1:], path.times[1:])
    ):
        total += switch_cost(p, q, t, tau, rho, params, congestion)
    return total + terminal_cost(path.nodes[-1], path.times[-1], params)
