"""Randomized checks of the monotonicity inequalities on fixed-instant games."""

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from mfg_switch.equilibrium.fixed_instant import FixedSwitchInstance
from mfg_switch.utilities.constants import DEFAULT_MONOTONICITY_TRIALS

logger = logging.getLogger(__name__)


class MonotonicityReport(BaseModel):
    form: str
    trials: int
    rho0_samples: List[float]
    minima: Dict[str, float] = Field(default_factory=dict)
    violations: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _instance_form(instance: FixedSwitchInstance) -> str:
    depth = max(len(path) for path in instance.paths)
    if depth == 1:
        return "parallel"
    if depth == 2:
        return "tree"
    raise ValueError(f"Monotonicity checks support trees of depth 2, got depth {depth}")


def _effective_slope(instance: FixedSwitchInstance, name: str) -> float:
    link = instance.link(name)
    return float(link.residence * link.slope)


def _quadratic_minimum(
    rng: np.random.Generator, slopes: np.ndarray, trials: int, scale: np.ndarray
) -> float:
    """Smallest sampled ``sum_i slope_i * scale * (x'_i - x''_i)^2`` over pairs of splits."""
    first = rng.dirichlet(np.ones(len(slopes)), size=trials)
    second = rng.dirichlet(np.ones(len(slopes)), size=trials)
    delta = first - second
    values = scale * (delta**2 @ slopes)
    return float(values.min())


def check_monotonicity(
    instance: FixedSwitchInstance,
    trials: int = DEFAULT_MONOTONICITY_TRIALS,
    rho0_samples: Optional[Sequence[float]] = None,
    seed: int = 0,
) -> MonotonicityReport:
    """Sample the monotonicity inequalities on random pairs of splits.

    Parallel links are checked through the sum over links of cost difference
    times coefficient difference. Two-stage trees add one such sum per
    second-stage decision, with the reaching mass drawn uniformly from (0, 1],
    and one over the first stage, where a first-stage link is charged the
    cost of its sub-tree at the equal-cost split of that sub-tree.
    A zero slope is reported as a violation of strict monotonicity.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    form = _instance_form(instance)
    samples = [float(r) for r in (rho0_samples or [1.0])]
    if any(r <= 0 for r in samples):
        raise ValueError("rho0 samples must be positive")
    rng = np.random.default_rng(seed)
    report = MonotonicityReport(form=form, trials=trials, rho0_samples=samples)

    for link in instance.links:
        if link.slope <= 0:
            report.violations.append(f"Link {link.name} has slope {link.slope}: not strictly monotone")

    first_stage: List[str] = []
    children: Dict[str, List[str]] = {}
    for path in instance.paths:
        if path[0] not in first_stage:
            first_stage.append(path[0])
            children[path[0]] = []
        if len(path) == 2:
            children[path[0]].append(path[1])

    for rho0 in samples:
        if form == "tree":
            for head, subtree in children.items():
                if len(subtree) < 2:
                    continue
                slopes = np.array([_effective_slope(instance, n) for n in subtree])
                mass = 1.0 - rng.uniform(0.0, 1.0, size=trials)
                name = f"subtree {head}"
                value = _quadratic_minimum(rng, slopes, trials, mass * rho0)
                report.minima[name] = min(report.minima.get(name, np.inf), value)

        if len(first_stage) < 2:
            continue
        stage_slopes = []
        for head in first_stage:
            slope = _effective_slope(instance, head)
            subtree = children[head]
            if subtree:
                # Equalized sub-tree cost grows with the entering mass at rate 1 / sum(1 / c_j).
                conductance = sum(
                    1.0 / s if s > 0 else np.inf
                    for s in (_effective_slope(instance, n) for n in subtree)
                )
                slope += 1.0 / conductance
            stage_slopes.append(slope)
        name = "first stage" if form == "tree" else "links"
        value = _quadratic_minimum(rng, np.array(stage_slopes), trials, np.full(trials, rho0))
        report.minima[name] = min(report.minima.get(name, np.inf), value)

    for name, value in report.minima.items():
        if not value > 0:
            report.violations.append(f"Minimum of the {name} inequality is {value!r}")
    if report.violations:
        logger.warning("Monotonicity violations: %s", "; ".join(report.violations))
    return report
