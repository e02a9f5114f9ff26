"""Games whose switching instants are data: only the node choice is optimized.

A path is a sequence of links; a link holds its load between fixed entry and
exit instants and charges ``residence * (slope * load + intercept)``.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import sympy

from mfg_switch.utilities.constants import DEFAULT_MAX_ITER, DEFAULT_POLISH_WINDOW
from mfg_switch.utilities.errors import BadSlope, DegenerateCost, ErrorMessages
from mfg_switch.utilities.exact import Number, as_exact, as_time, is_exact

logger = logging.getLogger(__name__)

LinkPath = Tuple[str, ...]


@dataclass(frozen=True)
class FixedLink:
    name: str
    slope: Number
    enter: Fraction
    leave: Fraction
    intercept: Number = 0

    def __post_init__(self):
        object.__setattr__(self, "slope", as_exact(self.slope))
        object.__setattr__(self, "intercept", as_exact(self.intercept))
        object.__setattr__(self, "enter", as_time(self.enter))
        object.__setattr__(self, "leave", as_time(self.leave))
        if self.slope < 0:
            raise BadSlope(ErrorMessages.format_error(ErrorMessages.BAD_SLOPE, self.slope))
        if self.leave <= self.enter:
            raise ValueError(f"Link {self.name} must be left after it is entered")

    @property
    def residence(self) -> Fraction:
        return self.leave - self.enter

    def cost(self, load: Number) -> Number:
        return self.residence * (self.slope * load + self.intercept)


@dataclass(frozen=True)
class FixedSwitchInstance:
    links: Tuple[FixedLink, ...]
    paths: Tuple[LinkPath, ...]
    rho0: Number = 1

    def __post_init__(self):
        object.__setattr__(self, "links", tuple(self.links))
        object.__setattr__(self, "paths", tuple(tuple(p) for p in self.paths))
        object.__setattr__(self, "rho0", as_exact(self.rho0))
        names = [link.name for link in self.links]
        if len(set(names)) != len(names):
            raise ValueError("Link names must be unique")
        if not self.paths or len(set(self.paths)) != len(self.paths):
            raise ValueError("An instance needs distinct, non-empty paths")
        if self.rho0 <= 0:
            raise ValueError(f"rho0 must be positive, got {self.rho0}")
        by_name = dict(zip(names, self.links))
        for path in self.paths:
            if not path or any(name not in by_name for name in path):
                raise ValueError(f"Path {path} uses unknown links")
            for a, b in zip(path, path[1:]):
                if by_name[a].leave != by_name[b].enter:
                    raise ValueError(f"Links {a} and {b} are not consecutive in time")

    def link(self, name: str) -> FixedLink:
        return next(link for link in self.links if link.name == name)

    @property
    def exact(self) -> bool:
        return all(
            isinstance(v, Fraction)
            for link in self.links
            for v in (link.slope, link.intercept)
        ) and isinstance(self.rho0, Fraction)

    @staticmethod
    def label(path: LinkPath) -> str:
        return ">".join(path)

    def loads(self, shares: Sequence[Number]) -> Dict[str, Number]:
        """Mass on each link when path ``i`` carries ``shares[i] * rho0``."""
        loads: Dict[str, Number] = {link.name: 0 for link in self.links}
        for path, share in zip(self.paths, shares):
            for name in path:
                loads[name] = loads[name] + share * self.rho0
        return loads

    def path_costs(self, shares: Sequence[Number]) -> Tuple[Number, ...]:
        loads = self.loads(shares)
        return tuple(
            sum((self.link(name).cost(loads[name]) for name in path), 0)
            for path in self.paths
        )

    def restricted(self, indices: Sequence[int]) -> "FixedSwitchInstance":
        return FixedSwitchInstance(
            self.links, tuple(self.paths[i] for i in indices), self.rho0
        )

    def decision_coefficients(
        self, shares: Sequence[Number]
    ) -> Dict[LinkPath, Dict[str, Number]]:
        """Split of the mass reaching every prefix among its next links."""
        reaching: Dict[LinkPath, Number] = {}
        for path, share in zip(self.paths, shares):
            for depth in range(len(path) + 1):
                prefix = path[:depth]
                reaching[prefix] = reaching.get(prefix, 0) + share
        coefficients: Dict[LinkPath, Dict[str, Number]] = {}
        for prefix, mass in reaching.items():
            depth = len(prefix)
            children = sorted(
                {p[depth] for p in self.paths if p[:depth] == prefix and len(p) > depth}
            )
            if not children:
                continue
            coefficients[prefix] = {
                child: (reaching.get(prefix + (child,), 0) / mass if mass else 0)
                for child in children
            }
        return coefficients


def parallel_links(
    slopes: Sequence[Number],
    rho0: Number = 1,
    intercepts: Optional[Sequence[Number]] = None,
) -> FixedSwitchInstance:
    """Links p1..pn all entered at t = 1 and left at T = 2."""
    intercepts = intercepts if intercepts is not None else [0] * len(slopes)
    links = tuple(
        FixedLink(f"p{i + 1}", slope, 1, 2, intercept)
        for i, (slope, intercept) in enumerate(zip(slopes, intercepts))
    )
    return FixedSwitchInstance(links, tuple((link.name,) for link in links), rho0)


def example2(rho0: Number = 1) -> FixedSwitchInstance:
    return parallel_links((1, 2, 3), rho0)


def example3(rho0: Number = 1) -> FixedSwitchInstance:
    links = (
        FixedLink("p1", 1, 1, 2),
        FixedLink("p2", 4, 1, Fraction(3, 2)),
        FixedLink("p3", 3, Fraction(3, 2), 2),
        FixedLink("p4", 2, Fraction(3, 2), 2),
    )
    return FixedSwitchInstance(links, (("p1",), ("p2", "p3"), ("p2", "p4")), rho0)


class ParallelSolution(NamedTuple):
    coefficients: Tuple[Number, ...]
    common_cost: Number
    dropped: Tuple[int, ...]


def equalize_parallel_links(
    slopes: Sequence[Number],
    rho0: Number = 1,
    intercepts: Optional[Sequence[Number]] = None,
) -> ParallelSolution:
    """Equal-cost split over parallel links ``C_i(x) = slope_i * x + intercept_i``.

    Links whose coefficient would be negative are dropped, most expensive
    intercept first, and the remaining links are re-equalized.

    Raises:
        BadSlope: a slope is not strictly positive.
    """
    intercepts = list(intercepts) if intercepts is not None else [0] * len(slopes)
    if len(intercepts) != len(slopes) or not slopes:
        raise ValueError("Need one intercept per slope and at least one link")
    exact = is_exact(*slopes, *intercepts, rho0)
    convert = Fraction if exact else float
    c = [convert(s) for s in slopes]
    b = [convert(v) for v in intercepts]
    rho0 = convert(rho0)
    if any(s <= 0 for s in c):
        raise BadSlope(ErrorMessages.format_error(ErrorMessages.BAD_SLOPE, tuple(slopes)))
    if rho0 <= 0:
        raise ValueError(f"rho0 must be positive, got {rho0}")

    active = list(range(len(c)))
    while True:
        conductance = sum(1 / (c[i] * rho0) for i in active)
        common = (1 + sum(b[i] / (c[i] * rho0) for i in active)) / conductance
        coefficients = {i: (common - b[i]) / (c[i] * rho0) for i in active}
        if all(value >= 0 for value in coefficients.values()):
            break
        worst = max(active, key=lambda i: (b[i], i))
        logger.debug("Dropping link %d from the equalization", worst)
        active.remove(worst)
    zero = convert(0)
    return ParallelSolution(
        tuple(coefficients.get(i, zero) for i in range(len(c))),
        common,
        tuple(i for i in range(len(c)) if i not in coefficients),
    )


def solve_parallel_links(
    slopes: Sequence[Number],
    rho0: Number = 1,
    intercepts: Optional[Sequence[Number]] = None,
) -> Tuple[Number, ...]:
    """Convex coefficients that equalize the link costs; exact for rational inputs."""
    return equalize_parallel_links(slopes, rho0, intercepts).coefficients


@dataclass(frozen=True)
class EqualizationResult:
    shares: Tuple[Number, ...]
    common_cost: Number
    path_costs: Tuple[Number, ...]
    distribution: Dict[str, Number]
    coefficients: Dict[LinkPath, Dict[str, Number]]
    dropped: Tuple[int, ...] = field(default_factory=tuple)
    exact: bool = True


def _solve_active(
    instance: FixedSwitchInstance, active: List[int]
) -> Tuple[List[Number], Number]:
    size = len(active)
    matrix = [[0] * (size + 1) for _ in range(size + 1)]
    rhs: List[Number] = [0] * (size + 1)
    for row, a in enumerate(active):
        for col, other in enumerate(active):
            shared = set(instance.paths[a]) & set(instance.paths[other])
            matrix[row][col] = sum(
                (instance.link(n).residence * instance.link(n).slope * instance.rho0 for n in shared),
                0,
            )
        matrix[row][size] = -1
        rhs[row] = -sum(
            (instance.link(n).residence * instance.link(n).intercept for n in instance.paths[a]),
            0,
        )
    matrix[size] = [1] * size + [0]
    rhs[size] = 1

    if instance.exact:
        system = sympy.Matrix(
            [[sympy.Rational(Fraction(v).numerator, Fraction(v).denominator) for v in r] for r in matrix]
        )
        target = sympy.Matrix(
            [sympy.Rational(Fraction(v).numerator, Fraction(v).denominator) for v in rhs]
        )
        try:
            solution = system.LUsolve(target)
        except ValueError as e:
            raise DegenerateCost(f"Equalization system is singular: {e}", e) from e
        values = [Fraction(int(v.p), int(v.q)) for v in solution]
    else:
        try:
            values = list(
                np.linalg.solve(np.array(matrix, dtype=float), np.array(rhs, dtype=float))
            )
        except np.linalg.LinAlgError as e:
            raise DegenerateCost(f"Equalization system is singular: {e}", e) from e
        values = [float(v) for v in values]
    return values[:size], values[size]


def solve_equalization(instance: FixedSwitchInstance) -> EqualizationResult:
    """Path shares with equal cost on every used path.

    Paths with a negative share are dropped one at a time, most negative
    first, until the solution is a convex split.
    """
    active = list(range(len(instance.paths)))
    while True:
        shares, common = _solve_active(instance, active)
        if all(share >= 0 for share in shares):
            break
        if len(active) == 1:
            raise DegenerateCost("No convex equal-cost split exists")
        worst = min(range(len(active)), key=lambda k: (shares[k], k))
        active.pop(worst)
    zero = Fraction(0) if instance.exact else 0.0
    full = [zero] * len(instance.paths)
    for k, index in enumerate(active):
        full[index] = shares[k]
    return EqualizationResult(
        shares=tuple(full),
        common_cost=common,
        path_costs=instance.path_costs(full),
        distribution=instance.loads(full),
        coefficients=instance.decision_coefficients(full),
        dropped=tuple(i for i in range(len(instance.paths)) if i not in active),
        exact=instance.exact,
    )


class Example3Solution(NamedTuple):
    coefficients: Tuple[Number, Number, Number, Number]
    distribution: Tuple[Number, Number, Number, Number]
    path_costs: Tuple[Number, ...]
    common_cost: Number


def solve_example3(rho0: Number = 1) -> Example3Solution:
    """Equal-cost split on the two-stage network p1 | p2 > (p3 | p4)."""
    result = solve_equalization(example3(rho0))
    first = result.coefficients[()]
    second = result.coefficients[("p2",)]
    loads = result.distribution
    return Example3Solution(
        coefficients=(first["p1"], first["p2"], second["p3"], second["p4"]),
        distribution=tuple(loads[name] for name in ("p1", "p2", "p3", "p4")),
        path_costs=result.path_costs,
        common_cost=result.common_cost,
    )


@dataclass(frozen=True)
class FixedCertificate:
    certified: bool
    path_costs: Tuple[Number, ...]
    support: Tuple[str, ...]
    message: str


def certify_fixed_distribution(
    instance: FixedSwitchInstance, shares: Sequence[Number], tol: float = 1e-9
) -> FixedCertificate:
    """Accept ``shares`` when every loaded path is a cheapest path within ``tol``."""
    shares = tuple(shares)
    if len(shares) != len(instance.paths):
        raise ValueError(f"Expected {len(instance.paths)} shares, got {len(shares)}")
    costs = instance.path_costs(shares)
    cheapest = min(costs)
    support = tuple(
        instance.label(path)
        for path, cost in zip(instance.paths, costs)
        if cost <= cheapest + tol
    )
    if any(s < -tol for s in shares) or abs(sum(shares) - 1) > tol:
        return FixedCertificate(False, costs, support, "Shares are not a convex split")
    outside = [
        instance.label(path)
        for path, share in zip(instance.paths, shares)
        if share > tol and instance.label(path) not in support
    ]
    if outside:
        return FixedCertificate(
            False,
            costs,
            support,
            f"Loaded paths {outside} cost more than the best response {list(support)}",
        )
    return FixedCertificate(True, costs, support, "Every loaded path is a best response")


@dataclass(frozen=True)
class FixedEquilibriumReport:
    shares: Tuple[Number, ...]
    iterations: int
    wardrop_gap: float
    certified: bool
    polished: bool
    message: str = ""


def find_fixed_instant_equilibrium(
    instance: FixedSwitchInstance,
    start: Optional[Sequence[float]] = None,
    tol: float = 1e-6,
    max_iter: int = DEFAULT_MAX_ITER,
    polish_window: int = DEFAULT_POLISH_WINDOW,
    gap_tol: float = 1e-12,
) -> FixedEquilibriumReport:
    """Fictitious play on path shares with periodic equal-cost polishing.

    Each iteration moves the shares toward a uniform split over the cheapest
    paths with step 1/(k+2). Every ``polish_window`` iterations the paths that
    were best responses during the window are equalized exactly; the result is
    returned when it certifies on the full instance.
    """
    count = len(instance.paths)
    shares = np.full(count, 1.0 / count) if start is None else np.asarray(start, dtype=float)
    if shares.shape != (count,) or np.any(shares < 0) or abs(shares.sum() - 1) > 1e-9:
        raise ValueError("Start must be a convex split over the instance paths")
    window: set = set()
    gap = float("inf")
    for iteration in range(max_iter):
        costs = np.array([float(c) for c in instance.path_costs(shares)])
        cheapest = costs.min()
        near = costs <= cheapest + 1e-12 * (1 + abs(cheapest))
        gap = float(np.dot(shares, costs - cheapest))
        if gap < gap_tol:
            return FixedEquilibriumReport(
                tuple(float(s) for s in shares), iteration, gap, True, False,
                "Wardrop gap below tolerance",
            )
        window.update(np.flatnonzero(near).tolist())
        if (iteration + 1) % polish_window == 0:
            polished = _polish(instance, sorted(window), tol)
            if polished is not None:
                return FixedEquilibriumReport(
                    polished, iteration + 1, 0.0, True, True,
                    "Equal-cost split on the best-response support",
                )
            window = set()
        step = 1.0 / (iteration + 2)
        shares = (1 - step) * shares + step * near / near.sum()
    return FixedEquilibriumReport(
        tuple(float(s) for s in shares), max_iter, gap, False, False,
        f"No certified split after {max_iter} iterations",
    )


def _polish(
    instance: FixedSwitchInstance, support: List[int], tol: float
) -> Optional[Tuple[Number, ...]]:
    try:
        result = solve_equalization(instance.restricted(support))
    except DegenerateCost:
        return None
    shares: List[Number] = [0] * len(instance.paths)
    for k, index in enumerate(support):
        shares[index] = result.shares[k]
    if certify_fixed_distribution(instance, shares, tol).certified:
        return tuple(shares)
    return None
