"""Randomized spot checks of the regularity assumptions on a switching cost."""

import logging
import math
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from mfg_switch.costs.cost_model import (
    CostParams,
    EdgeCongestion,
    SwitchCost,
    switch_cost,
)
from mfg_switch.network.topology import Node
from mfg_switch.profiles.mass_field import MassField, field_l2_distance
from mfg_switch.utilities.constants import BLOWUP_GAP_FRACTION, BLOWUP_THRESHOLD
from mfg_switch.utilities.exact import as_time

logger = logging.getLogger(__name__)

_TIME_RESOLUTION = 4096


class AssumptionCheck(BaseModel):
    name: str
    passed: bool
    worst: float = Field(description="Worst observed value of the checked quantity")
    detail: str = ""


class AssumptionReport(BaseModel):
    samples: int
    checks: List[AssumptionCheck]
    degenerate_edges: List[Tuple[str, str]] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]


def validate_assumptions(
    params: CostParams,
    rho: MassField,
    samples: int = 1000,
    cost: Optional[SwitchCost] = None,
    seed: int = 0,
    min_gap: Optional[Fraction] = None,
) -> AssumptionReport:
    """Sample edges and times and report the worst violation of each assumption.

    Args:
        params: Cost parameters; also provide the Lipschitz bounds.
        rho: Mass field the cost is evaluated against.
        samples: Number of random tuples per check.
        cost: Alternative switching cost; defaults to the reciprocal-gap family.
        seed: Seed of the sampler.
        min_gap: Smallest gap τ - t for the Lipschitz checks, T/8 by default.

    Returns:
        A report whose ``failures`` lists the checks that did not hold.
    """
    rng = np.random.default_rng(seed)
    horizon = params.horizon
    gap_floor = min_gap if min_gap is not None else horizon / 8
    congestion = EdgeCongestion.from_field(rho, params)
    if cost is None:

        def cost(p, q, t, tau, field):
            return switch_cost(
                p, q, t, tau, field, params,
                congestion if field is rho else None,
            )

    edges = params.edges()

    def random_time(low: Fraction, high: Fraction) -> Fraction:
        return low + (high - low) * Fraction(
            int(rng.integers(1, _TIME_RESOLUTION)), _TIME_RESOLUTION
        )

    monotone_worst = -math.inf
    blowup_worst = math.inf
    lip_t_worst = 0.0
    lip_rho_worst = 0.0
    for _ in range(samples):
        p, q = edges[int(rng.integers(len(edges)))]
        cbar = congestion[(p, q)]

        t = random_time(Fraction(0), horizon * Fraction(9, 10))
        tau1 = random_time(t, horizon)
        tau2 = random_time(tau1, horizon)
        monotone_worst = max(
            monotone_worst, cost(p, q, t, tau2, rho) - cost(p, q, t, tau1, rho)
        )

        near = cost(p, q, t, t + horizon * as_time(BLOWUP_GAP_FRACTION), rho)
        far = cost(p, q, t, horizon, rho)
        ratio = near / far if far > 0 else (math.inf if near > 0 else 0.0)
        blowup_worst = min(blowup_worst, ratio)

        if horizon - gap_floor > 0:
            tau = random_time(gap_floor, horizon)
            t1 = random_time(Fraction(0), tau - gap_floor)
            t2 = random_time(Fraction(0), tau - gap_floor)
            if t1 != t2:
                bound = cbar / float(gap_floor) ** 2
                slope = abs(cost(p, q, t1, tau, rho) - cost(p, q, t2, tau, rho)) / float(
                    abs(t1 - t2)
                )
                lip_t_worst = max(lip_t_worst, slope - bound)

            other = _perturbed(rho, rng)
            distance = field_l2_distance(rho, other)
            if distance > 0:
                bound = (params.weight(p) + params.weight(q)) / (
                    math.sqrt(float(horizon)) * float(gap_floor)
                )
                change = abs(cost(p, q, t1, tau, rho) - cost(p, q, t1, tau, other))
                lip_rho_worst = max(lip_rho_worst, change / distance - bound)

    degenerate = [
        (Node(a, params.size).label, Node(b, params.size).label)
        for a, b in congestion.degenerate_edges()
    ]
    checks = [
        AssumptionCheck(
            name="decreasing_in_tau",
            passed=monotone_worst < 0,
            worst=monotone_worst,
            detail="max of C(tau2) - C(tau1) over tau1 < tau2",
        ),
        AssumptionCheck(
            name="blow_up",
            passed=blowup_worst >= BLOWUP_THRESHOLD,
            worst=blowup_worst,
            detail="min of C(t, t + gap) / C(t, T) for a vanishing gap",
        ),
        AssumptionCheck(
            name="lipschitz_in_t",
            passed=lip_t_worst <= 1e-9,
            worst=lip_t_worst,
            detail="max excess of the t difference quotient over cbar / h^2",
        ),
        AssumptionCheck(
            name="lipschitz_in_rho",
            passed=lip_rho_worst <= 1e-9,
            worst=lip_rho_worst,
            detail="max excess of the rho difference quotient over its bound",
        ),
        AssumptionCheck(
            name="positive_congestion",
            passed=not degenerate,
            worst=float(len(degenerate)),
            detail="edges whose congestion average is zero",
        ),
    ]
    for check in checks:
        if not check.passed:
            logger.warning("Assumption check %s failed (worst %s)", check.name, check.worst)
    return AssumptionReport(samples=samples, checks=checks, degenerate_edges=degenerate)


def _perturbed(rho: MassField, rng: np.random.Generator) -> MassField:
    total = float(rho.total_mass)
    shares = rng.dirichlet(np.ones(2**rho.size))
    other = MassField.static(
        rho.size, rho.horizon, {i: float(s) * total for i, s in enumerate(shares)}
    )
    return rho.blend(other, float(rng.uniform(0.05, 1.0)))
