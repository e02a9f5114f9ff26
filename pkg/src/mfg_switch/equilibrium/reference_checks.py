"""Reproduces the fixed-instant reference games and their exact solutions."""

import logging
from fractions import Fraction
from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, Field

from mfg_switch.equilibrium.fixed_instant import (
    FixedSwitchInstance,
    certify_fixed_distribution,
    example2,
    example3,
    find_fixed_instant_equilibrium,
    solve_example3,
    solve_parallel_links,
)
from mfg_switch.equilibrium.monotonicity import check_monotonicity
from mfg_switch.utilities.exact import Number, format_number

logger = logging.getLogger(__name__)

CONVERGENCE_TOL = 1e-6


class ReferenceCheck(BaseModel):
    name: str
    expected: str
    actual: str
    passed: bool


class ReferenceReport(BaseModel):
    checks: List[ReferenceCheck] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[ReferenceCheck]:
        return [check for check in self.checks if not check.passed]


def _text(values: Sequence[Number]) -> str:
    return ", ".join(format_number(v) for v in values)


def _exact_check(name: str, expected: Sequence[Number], actual: Sequence[Number]) -> ReferenceCheck:
    return ReferenceCheck(
        name=name,
        expected=_text(expected),
        actual=_text(actual),
        passed=tuple(Fraction(v) for v in expected) == tuple(actual),
    )


def _convergence_check(
    name: str,
    instance: FixedSwitchInstance,
    expected: Sequence[Fraction],
    rng: np.random.Generator,
    starts: int,
) -> ReferenceCheck:
    target = np.array([float(v) for v in expected])
    worst = 0.0
    uncertified = 0
    for start in rng.dirichlet(np.ones(len(instance.paths)), size=starts):
        result = find_fixed_instant_equilibrium(instance, start=start, tol=CONVERGENCE_TOL)
        if not result.certified:
            uncertified += 1
        distance = float(np.max(np.abs(np.array([float(s) for s in result.shares]) - target)))
        worst = max(worst, distance)
    return ReferenceCheck(
        name=name,
        expected=f"{starts} starts within {CONVERGENCE_TOL!r}",
        actual=f"worst distance {worst!r}, {uncertified} uncertified",
        passed=uncertified == 0 and worst <= CONVERGENCE_TOL,
    )


def verify_reference_instances(seed: int = 0, starts: int = 20, trials: int = 10_000) -> ReferenceReport:
    """Run every reference check; the report lists expected and observed values."""
    rng = np.random.default_rng(seed)
    report = ReferenceReport()
    checks = report.checks

    three = (Fraction(6, 11), Fraction(3, 11), Fraction(2, 11))
    checks.append(_exact_check("parallel three links", three, solve_parallel_links((1, 2, 3))))
    checks.append(
        _exact_check("parallel three links cost", [Fraction(6, 11)] * 3, example2().path_costs(three))
    )
    checks.append(
        _exact_check(
            "parallel two links", (Fraction(2, 3), Fraction(1, 3)), solve_parallel_links((1, 2))
        )
    )

    refused = certify_fixed_distribution(
        example2(), (Fraction(2, 3), Fraction(1, 3), Fraction(0))
    )
    checks.append(
        ReferenceCheck(
            name="parallel three links refuses 2/3, 1/3, 0",
            expected="refused, best response p3",
            actual=f"{'certified' if refused.certified else 'refused'}, "
            f"best response {', '.join(refused.support)}",
            passed=not refused.certified and refused.support == ("p3",),
        )
    )
    checks.append(_convergence_check("parallel three links fictitious play", example2(), three, rng, starts))

    solution = solve_example3()
    checks.append(
        _exact_check(
            "two-stage coefficients",
            (Fraction(13, 18), Fraction(5, 18), Fraction(2, 5), Fraction(3, 5)),
            solution.coefficients,
        )
    )
    checks.append(
        _exact_check(
            "two-stage distribution",
            (Fraction(13, 18), Fraction(5, 18), Fraction(1, 9), Fraction(1, 6)),
            solution.distribution,
        )
    )
    checks.append(
        _exact_check("two-stage path costs", [Fraction(13, 18)] * 3, solution.path_costs)
    )
    checks.append(
        _convergence_check(
            "two-stage fictitious play",
            example3(),
            (Fraction(13, 18), Fraction(1, 9), Fraction(1, 6)),
            rng,
            starts,
        )
    )

    for name, instance in (("parallel three links", example2()), ("two-stage", example3())):
        monotone = check_monotonicity(instance, trials=trials, seed=seed)
        checks.append(
            ReferenceCheck(
                name=f"{name} monotonicity",
                expected="all sampled minima positive",
                actual=", ".join(f"{k}={v!r}" for k, v in monotone.minima.items()),
                passed=monotone.passed,
            )
        )

    for check in report.failures:
        logger.warning("Check %s failed: expected %s, got %s", check.name, check.expected, check.actual)
    return report
