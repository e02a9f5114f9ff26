from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Tuple

from mfg_switch.flow.eps_paths import EpsPath
from mfg_switch.network.topology import Node
from mfg_switch.utilities.constants import COEFFICIENT_SUM_TOL
from mfg_switch.utilities.errors import BadCoefficients, ErrorMessages
from mfg_switch.utilities.exact import Number

DecisionKey = Tuple[int, Fraction]
TargetKey = Tuple[int, Fraction]


@dataclass(frozen=True)
class DecisionPlan:
    """Convex coefficients over the ε-optimal targets of every decision node.

    Keys are ``(node id, decision time)``; each maps ``(successor id, instant)``
    to its coefficient. Decision nodes in ``free`` receive no mass, so their
    coefficients carry no information.
    """

    size: int
    coefficients: Mapping[DecisionKey, Mapping[TargetKey, Number]]
    free: FrozenSet[DecisionKey] = field(default_factory=frozenset)

    @classmethod
    def decision_targets(cls, paths: Iterable[EpsPath]) -> Dict[DecisionKey, List[TargetKey]]:
        found: Dict[DecisionKey, set] = {}
        for path in paths:
            for p, s, q, tau in path.decisions():
                found.setdefault((p.index, s), set()).add((q.index, tau))
        return {key: sorted(targets) for key, targets in sorted(found.items())}

    @classmethod
    def uniform(cls, size: int, paths: Iterable[EpsPath]) -> "DecisionPlan":
        """Equal weights over every target the paths use at each decision node."""
        return cls(
            size,
            {
                key: {target: Fraction(1, len(targets)) for target in targets}
                for key, targets in cls.decision_targets(paths).items()
            },
        )

    def validate(self) -> None:
        for key, targets in self.coefficients.items():
            if any(value < 0 for value in targets.values()):
                raise BadCoefficients(
                    ErrorMessages.format_error(
                        ErrorMessages.BAD_COEFFICIENTS, key[0], key[1], "negative weight"
                    )
                )
            total = sum(targets.values())
            if key not in self.free and abs(total - 1) > COEFFICIENT_SUM_TOL:
                raise BadCoefficients(
                    ErrorMessages.format_error(
                        ErrorMessages.BAD_COEFFICIENTS, key[0], key[1], f"sum is {total}"
                    )
                )

    def coefficient(self, node: Node, t: Fraction, succ: Node, tau: Fraction) -> Number:
        return self.coefficients.get((node.index, t), {}).get((succ.index, tau), 0)

    def path_weight(self, path: EpsPath) -> Number:
        """Product of the coefficients along ``path``."""
        weight: Number = 1
        for p, s, q, tau in path.decisions():
            weight = weight * self.coefficient(p, s, q, tau)
        return weight

    def support(self) -> FrozenSet[Tuple[int, Fraction, int, Fraction]]:
        return frozenset(
            (node, t, succ, tau)
            for (node, t), targets in self.coefficients.items()
            for (succ, tau), value in targets.items()
            if value > 0
        )

    def blend(self, other: "DecisionPlan", weight: Number) -> "DecisionPlan":
        """Per-decision-node convex combination ``(1 - weight) * self + weight * other``."""
        coefficients = {}
        for key in set(self.coefficients) | set(other.coefficients):
            mine = self.coefficients.get(key, {})
            theirs = other.coefficients.get(key, {})
            if not mine or key in self.free:
                coefficients[key] = dict(theirs)
            elif not theirs or key in other.free:
                coefficients[key] = dict(mine)
            else:
                coefficients[key] = {
                    target: (1 - weight) * mine.get(target, 0)
                    + weight * theirs.get(target, 0)
                    for target in set(mine) | set(theirs)
                }
        return DecisionPlan(self.size, coefficients, self.free & other.free)

    def to_records(self) -> List[Dict[str, Any]]:
        return [
            {
                "node": node,
                "bits": Node(node, self.size).label,
                "t": t,
                "free": (node, t) in self.free,
                "targets": [
                    {
                        "succ": succ,
                        "bits": Node(succ, self.size).label,
                        "tau": tau,
                        "lambda": value,
                    }
                    for (succ, tau), value in sorted(targets.items())
                ],
            }
            for (node, t), targets in sorted(self.coefficients.items())
        ]
