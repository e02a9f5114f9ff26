"""Damped best-response iteration for ε-mean-field equilibria."""

import logging
from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, SkipValidation, field_validator

from mfg_switch.costs.cost_model import CostParams
from mfg_switch.discretization.partition import EpsPartition
from mfg_switch.flow.builder import combine
from mfg_switch.flow.certify import MembershipCertificate, certify_membership
from mfg_switch.flow.decision_plan import DecisionPlan
from mfg_switch.flow.eps_paths import (
    EpsPath,
    RoundingDiagnostics,
    enumerate_eps_paths,
    rounding_diagnostics,
)
from mfg_switch.profiles.mass_field import MassField, field_l2_distance
from mfg_switch.solver.time_grid import TimeGrid
from mfg_switch.solver.value_solver import solve_value
from mfg_switch.solver.value_table import ValueTable
from mfg_switch.utilities.constants import (
    DEFAULT_MAX_ITER,
    DEFAULT_MAX_PATHS,
    DEFAULT_TOL,
)
from mfg_switch.utilities.errors import MfgSwitchError
from mfg_switch.utilities.events import (
    EquilibriumFinishedEvent,
    IterationCompletedEvent,
    emit,
)

logger = logging.getLogger(__name__)


class EquilibriumOptions(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    tol: float = Field(default=DEFAULT_TOL, gt=0, description="Field L² tolerance")
    max_iter: int = Field(default=DEFAULT_MAX_ITER, ge=1)
    eta: Union[Literal["harmonic"], float] = Field(
        default="harmonic",
        description="'harmonic' for 1/(k+1), or a constant step in (0, 1]",
    )
    mode: Literal["grid", "analytic"] = "grid"
    max_paths: int = Field(default=DEFAULT_MAX_PATHS, ge=1)
    check_resolution: bool = True

    @field_validator("eta")
    @classmethod
    def _check_eta(cls, value):
        if value != "harmonic" and not 0 < value <= 1:
            raise ValueError(f"Constant step must lie in (0, 1], got {value}")
        return value

    def step_size(self, iteration: int) -> float:
        if self.eta == "harmonic":
            return 1.0 / (iteration + 1)
        return float(self.eta)


class BestResponse(BaseModel):
    """Uniform-coefficient best response to a mass field."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    table: ValueTable
    paths: SkipValidation[List[EpsPath]]
    plan: SkipValidation[DecisionPlan]
    field: SkipValidation[MassField]
    diagnostics: RoundingDiagnostics


class EquilibriumReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    rho: SkipValidation[MassField]
    residual: float
    certified: bool
    iterations: int
    trace: List[float] = Field(default_factory=list)
    certificate: Optional[MembershipCertificate] = None
    plan: SkipValidation[Optional[DecisionPlan]] = None
    paths: SkipValidation[List[EpsPath]] = Field(default_factory=list)
    min_gap: Optional[float] = None
    phi_single_valued: bool = True
    diagnostics: Optional[RoundingDiagnostics] = None
    message: str = ""


def best_response(
    rho: MassField,
    params: CostParams,
    part: EpsPartition,
    grid: TimeGrid,
    initial: MassField,
    opts: Optional[EquilibriumOptions] = None,
) -> BestResponse:
    opts = opts or EquilibriumOptions()
    table = solve_value(rho, params, grid, opts.mode, opts.check_resolution)
    paths = enumerate_eps_paths(table, part, initial, opts.max_paths)
    plan = DecisionPlan.uniform(params.size, paths)
    return BestResponse(
        table=table,
        paths=paths,
        plan=plan,
        field=combine(plan, paths, initial),
        diagnostics=rounding_diagnostics(table, part, paths),
    )


def find_equilibrium(
    params: CostParams,
    initial: MassField,
    part: EpsPartition,
    grid: TimeGrid,
    opts: Optional[EquilibriumOptions] = None,
) -> EquilibriumReport:
    """Fictitious play on mass fields until a fixed point of the ε-best response is certified.

    Every iteration tests two candidates: the running average itself, when its
    best response is within tolerance, and the best response, when that is
    reproduced by its own best response. The first candidate that
    ``certify_membership`` accepts is returned. Solver errors end the run with
    an uncertified report instead of raising.
    """
    opts = opts or EquilibriumOptions()
    part.check_grid(grid)
    rho = MassField.static(initial.size, initial.horizon, initial.initial_masses())
    trace: List[float] = []
    best: Optional[EquilibriumReport] = None

    def finish(report: EquilibriumReport) -> EquilibriumReport:
        emit(
            "find_equilibrium",
            EquilibriumFinishedEvent(
                type="equilibrium_finished",
                source="find_equilibrium",
                certified=report.certified,
                iterations=report.iterations,
                residual=report.residual,
            ),
        )
        return report

    def accepted(candidate: MassField, response: BestResponse, residual: float) -> Optional[EquilibriumReport]:
        certificate = certify_membership(
            candidate, response.table, part, initial, opts.tol, opts.max_paths
        )
        if not certificate.certified:
            return None
        return EquilibriumReport(
            rho=candidate,
            residual=residual,
            certified=True,
            iterations=len(trace),
            trace=list(trace),
            certificate=certificate,
            plan=certificate.plan,
            paths=certificate.paths,
            min_gap=_as_float(response.table.min_gap),
            phi_single_valued=response.table.phi_single_valued,
            diagnostics=response.diagnostics,
            message=certificate.message,
        )

    for iteration in range(opts.max_iter):
        try:
            response = best_response(rho, params, part, grid, initial, opts)
            residual = field_l2_distance(rho, response.field)
            trace.append(residual)
            emit(
                "find_equilibrium",
                IterationCompletedEvent(
                    type="iteration_completed",
                    source="find_equilibrium",
                    iteration=iteration + 1,
                    residual=residual,
                ),
            )
            logger.debug("Iteration %d residual %.3e", iteration + 1, residual)

            if residual < opts.tol:
                report = accepted(rho, response, residual)
                if report is not None:
                    return finish(report)

            follow_up = best_response(response.field, params, part, grid, initial, opts)
            distance = field_l2_distance(response.field, follow_up.field)
            if distance < opts.tol:
                report = accepted(response.field, follow_up, distance)
                if report is not None:
                    return finish(report)
        except MfgSwitchError as e:
            logger.warning("Equilibrium search stopped: %s", e)
            return finish(
                _uncertified(best, rho, trace, f"{type(e).__name__}: {e}")
            )

        if best is None or residual < best.residual:
            best = EquilibriumReport(
                rho=rho,
                residual=residual,
                certified=False,
                iterations=len(trace),
                trace=[],
                plan=response.plan,
                paths=response.paths,
                min_gap=_as_float(response.table.min_gap),
                phi_single_valued=response.table.phi_single_valued,
                diagnostics=response.diagnostics,
            )
        rho = rho.blend(response.field, opts.step_size(iteration))

    return finish(
        _uncertified(best, rho, trace, f"No certified fixed point after {opts.max_iter} iterations")
    )


def _uncertified(
    best: Optional[EquilibriumReport],
    rho: MassField,
    trace: List[float],
    message: str,
) -> EquilibriumReport:
    if best is None:
        return EquilibriumReport(
            rho=rho,
            residual=trace[-1] if trace else float("inf"),
            certified=False,
            iterations=len(trace),
            trace=list(trace),
            message=message,
        )
    return best.model_copy(
        update={"iterations": len(trace), "trace": list(trace), "message": message}
    )


def _as_float(value) -> Optional[float]:
    return None if value is None else float(value)
