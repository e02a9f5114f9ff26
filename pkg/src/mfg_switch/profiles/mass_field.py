import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Tuple, Union

from mfg_switch.network.topology import Node
from mfg_switch.profiles.step_profile import StepProfile, l2_distance, time_integral
from mfg_switch.utilities.errors import DimensionMismatch, ErrorMessages, InvalidMass
from mfg_switch.utilities.exact import Number, as_time

NodeRef = Union[Node, int]


@dataclass(frozen=True)
class MassField:
    """One step profile per node of the N-target network."""

    size: int
    horizon: Fraction
    profiles: Tuple[StepProfile, ...]

    def __post_init__(self):
        object.__setattr__(self, "horizon", as_time(self.horizon))
        object.__setattr__(self, "profiles", tuple(self.profiles))
        if len(self.profiles) != 2**self.size:
            raise DimensionMismatch(
                ErrorMessages.format_error(
                    ErrorMessages.MISMATCH, len(self.profiles), 2**self.size
                )
            )
        for profile in self.profiles:
            if profile.horizon != self.horizon:
                raise DimensionMismatch(
                    ErrorMessages.format_error(
                        ErrorMessages.MISMATCH, profile.horizon, self.horizon
                    )
                )
        total = self.total_mass
        slack = 1e-9 * max(1.0, float(total))
        for node, profile in enumerate(self.profiles):
            for at, value in zip(profile.breakpoints, (*profile.values, profile.terminal)):
                if value > total + slack:
                    raise InvalidMass(
                        ErrorMessages.format_error(
                            ErrorMessages.INVALID_MASS, value, (node, at), total
                        )
                    )

    @classmethod
    def static(
        cls, size: int, horizon: Number, masses: Mapping[int, Number]
    ) -> "MassField":
        """Masses held at their nodes for the whole horizon, T included."""
        horizon = as_time(horizon)
        return cls(
            size,
            horizon,
            tuple(
                StepProfile.constant(masses.get(i, 0), horizon)
                for i in range(2**size)
            ),
        )

    def profile(self, node: NodeRef) -> StepProfile:
        return self.profiles[node.index if isinstance(node, Node) else node]

    @property
    def total_mass(self) -> Number:
        return sum((p.value_at(0) for p in self.profiles), 0)

    def initial_masses(self) -> Dict[int, Number]:
        """Positive masses at t = 0, keyed by node index."""
        return {
            i: p.value_at(0) for i, p in enumerate(self.profiles) if p.value_at(0) > 0
        }

    def integrals(self) -> Tuple[Number, ...]:
        return tuple(time_integral(p, 0, self.horizon) for p in self.profiles)

    def piece_counts(self) -> Tuple[int, ...]:
        return tuple(p.piece_count for p in self.profiles)

    def _check_compatible(self, other: "MassField") -> None:
        if (self.size, self.horizon) != (other.size, other.horizon):
            raise DimensionMismatch(
                ErrorMessages.format_error(
                    ErrorMessages.MISMATCH,
                    (self.size, self.horizon),
                    (other.size, other.horizon),
                )
            )

    def blend(self, other: "MassField", weight: Number) -> "MassField":
        self._check_compatible(other)
        return MassField(
            self.size,
            self.horizon,
            tuple(a.blend(b, weight) for a, b in zip(self.profiles, other.profiles)),
        )

    def __add__(self, other: "MassField") -> "MassField":
        self._check_compatible(other)
        return MassField(
            self.size,
            self.horizon,
            tuple(a + b for a, b in zip(self.profiles, other.profiles)),
        )

    def scale(self, factor: Number) -> "MassField":
        return MassField(
            self.size, self.horizon, tuple(p.scale(factor) for p in self.profiles)
        )

    def breakpoints(self) -> List[Fraction]:
        return sorted({b for p in self.profiles for b in p.breakpoints})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "N": self.size,
            "T": str(self.horizon),
            "profiles": [
                {**Node(i, self.size).to_dict(), **p.to_dict()}
                for i, p in enumerate(self.profiles)
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MassField":
        size = int(data["N"])
        ordered = sorted(data["profiles"], key=lambda entry: entry["id"])
        return cls(
            size,
            Fraction(data["T"]),
            tuple(StepProfile.from_dict(entry) for entry in ordered),
        )


def field_l2_distance(first: MassField, second: MassField) -> float:
    """Root-sum-square of the per-node L² distances."""
    first._check_compatible(second)
    return math.sqrt(
        sum(l2_distance(a, b) ** 2 for a, b in zip(first.profiles, second.profiles))
    )


def check_conservation(rho: MassField, tol: Number) -> bool:
    """Total mass equals the initial total at every piece midpoint and at T."""
    total = rho.total_mass
    cuts = rho.breakpoints()
    instants = [(a + b) / 2 for a, b in zip(cuts, cuts[1:])] + [rho.horizon]
    for t in instants:
        mass = sum((p.value_at(t) for p in rho.profiles), 0)
        if abs(mass - total) > tol:
            return False
    return True
