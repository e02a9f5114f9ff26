import logging
from typing import List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field, SkipValidation

from mfg_switch.costs.cost_model import CostParams
from mfg_switch.discretization.partition import EpsPartition
from mfg_switch.equilibrium.fixed_point import (
    EquilibriumOptions,
    EquilibriumReport,
    find_equilibrium,
)
from mfg_switch.profiles.mass_field import MassField, field_l2_distance
from mfg_switch.utilities.events import RefinementStepEvent, emit

logger = logging.getLogger(__name__)


class RefinementStep(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    m: int
    epsilon: float
    certified: bool
    residual: float
    iterations: int
    max_pieces: int
    phi_single_valued: bool
    min_gap: Optional[float] = None
    distance_to_previous: Optional[float] = None
    report: SkipValidation[EquilibriumReport] = Field(exclude=True)


class RefinementReport(BaseModel):
    steps: List[RefinementStep]

    @property
    def distances(self) -> List[float]:
        return [s.distance_to_previous for s in self.steps[1:] if s.distance_to_previous is not None]

    @property
    def piece_counts(self) -> List[int]:
        return [s.max_pieces for s in self.steps]

    @property
    def all_certified(self) -> bool:
        return all(s.certified for s in self.steps)

    @property
    def distances_decreasing(self) -> bool:
        d = self.distances
        return all(b < a for a, b in zip(d, d[1:]))


def refine_epsilon(
    params: CostParams,
    initial: MassField,
    m_sequence: Sequence[int],
    grid_divisor: Optional[int] = None,
    opts: Optional[EquilibriumOptions] = None,
) -> RefinementReport:
    """Solve for an ε-equilibrium on each partition of ``m_sequence`` and compare them.

    The report carries the L² distance between consecutive equilibria, the
    largest piece count per run and the single-valuedness flag of the argmin
    map; it does not assert convergence.
    """
    m_sequence = list(m_sequence)
    if not m_sequence or any(b <= a for a, b in zip(m_sequence, m_sequence[1:])):
        raise ValueError(f"m_sequence must be non-empty and increasing, got {m_sequence}")
    steps: List[RefinementStep] = []
    previous: Optional[EquilibriumReport] = None
    for m in m_sequence:
        part = EpsPartition(params.horizon, m)
        report = find_equilibrium(params, initial, part, part.grid(grid_divisor), opts)
        distance = None
        if previous is not None:
            distance = field_l2_distance(previous.rho, report.rho)
        steps.append(
            RefinementStep(
                m=m,
                epsilon=float(part.epsilon),
                certified=report.certified,
                residual=report.residual,
                iterations=report.iterations,
                max_pieces=max(report.rho.piece_counts()),
                phi_single_valued=report.phi_single_valued,
                min_gap=report.min_gap,
                distance_to_previous=distance,
                report=report,
            )
        )
        emit(
            "refine_epsilon",
            RefinementStepEvent(
                type="refinement_step",
                source="refine_epsilon",
                m=m,
                certified=report.certified,
                distance=distance,
            ),
        )
        logger.info("m=%d certified=%s distance=%s", m, report.certified, distance)
        previous = report
    return RefinementReport(steps=steps)
