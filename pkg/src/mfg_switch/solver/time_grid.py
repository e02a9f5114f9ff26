from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from mfg_switch.utilities.errors import ErrorMessages, OutOfRange
from mfg_switch.utilities.exact import Number, as_time


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid 0, δ, 2δ, ..., T with δ = T / steps."""

    horizon: Fraction
    steps: int

    def __post_init__(self):
        object.__setattr__(self, "horizon", as_time(self.horizon))
        if self.horizon <= 0:
            raise ValueError(f"Horizon must be positive, got {self.horizon}")
        if self.steps < 1:
            raise ValueError(f"A grid needs at least one step, got {self.steps}")

    @property
    def step(self) -> Fraction:
        return self.horizon / self.steps

    @property
    def points(self) -> Tuple[Fraction, ...]:
        return tuple(self.time_of(k) for k in range(self.steps + 1))

    def time_of(self, tick: int) -> Fraction:
        return self.step * tick

    def contains(self, t: Number) -> bool:
        ratio = as_time(t) / self.step
        return ratio.denominator == 1 and 0 <= ratio <= self.steps

    def tick_of(self, t: Number) -> int:
        t = as_time(t)
        if not self.contains(t):
            raise OutOfRange(
                ErrorMessages.format_error(ErrorMessages.OFF_GRID, t, self.step)
            )
        return int(t / self.step)

    def refined(self, factor: int = 2) -> "TimeGrid":
        return TimeGrid(self.horizon, self.steps * factor)
