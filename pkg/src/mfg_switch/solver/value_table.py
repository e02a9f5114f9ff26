from fractions import Fraction
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, SkipValidation

from mfg_switch.network.topology import Node
from mfg_switch.solver.time_grid import TimeGrid
from mfg_switch.utilities.exact import Number

ArgminKey = Tuple[int, int]
ArgminPair = Tuple[int, Fraction]


class ValueTable(BaseModel):
    """V(p, t) on a time grid with the optimal switches of every cell."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    size: int
    grid: SkipValidation[TimeGrid]
    mode: Literal["grid", "analytic"] = "grid"
    values: np.ndarray = Field(description="Array of shape (2**size, steps + 1)")
    argmins: SkipValidation[Dict[ArgminKey, Tuple[ArgminPair, ...]]] = Field(
        description="(node id, tick) -> sorted (successor id, switching instant) pairs"
    )
    cbar: Dict[Tuple[int, int], float] = Field(default_factory=dict)
    min_gap: Optional[Fraction] = None
    phi_single_valued: bool = True

    def value(self, node: Node, t: Number) -> float:
        return float(self.values[node.index, self.grid.tick_of(t)])

    def row(self, node: Node) -> np.ndarray:
        return self.values[node.index]

    def to_rows(self) -> List[Tuple[int, str, Fraction, float]]:
        points = self.grid.points
        return [
            (index, Node(index, self.size).label, t, float(self.values[index, k]))
            for index in range(2**self.size)
            for k, t in enumerate(points)
        ]

    def argmin_rows(self) -> List[Tuple[int, Fraction, int, Fraction]]:
        points = self.grid.points
        return [
            (index, points[tick], succ, tau)
            for (index, tick), pairs in sorted(self.argmins.items())
            for succ, tau in pairs
        ]
