"""Piecewise-constant functions of time on [0, T]."""

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

from mfg_switch.utilities.errors import (
    BadInterval,
    DimensionMismatch,
    ErrorMessages,
    InvalidMass,
)
from mfg_switch.utilities.exact import Number, as_exact, as_time, format_number, parse_number

Piece = Tuple[Fraction, Fraction, Number]


@dataclass(frozen=True)
class StepProfile:
    """Step function with right-open pieces and a separate value at T.

    ``values[j]`` holds on ``[breakpoints[j], breakpoints[j + 1])`` and
    ``terminal`` is the value at ``t = T``.
    """

    breakpoints: Tuple[Fraction, ...]
    values: Tuple[Number, ...]
    terminal: Number

    def __post_init__(self):
        breakpoints = tuple(as_time(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", breakpoints)
        if len(breakpoints) < 2 or breakpoints[0] != 0:
            raise BadInterval("A profile needs breakpoints 0 = b_0 < ... < b_K = T")
        if any(b <= a for a, b in zip(breakpoints, breakpoints[1:])):
            raise BadInterval(f"Breakpoints must increase strictly: {breakpoints}")
        if len(self.values) != len(breakpoints) - 1:
            raise DimensionMismatch(
                ErrorMessages.format_error(
                    ErrorMessages.MISMATCH, len(self.values), len(breakpoints) - 1
                )
            )
        for at, value in zip(breakpoints, (*self.values, self.terminal)):
            if not (math.isfinite(value) and value >= 0):
                raise InvalidMass(
                    ErrorMessages.format_error(ErrorMessages.INVALID_MASS, value, at, "inf")
                )

    @classmethod
    def constant(
        cls, value: Number, horizon: Number, terminal: Optional[Number] = None
    ) -> "StepProfile":
        return cls(
            (Fraction(0), as_time(horizon)),
            (value,),
            value if terminal is None else terminal,
        )

    @classmethod
    def from_intervals(
        cls,
        horizon: Number,
        intervals: Iterable[Tuple[Any, Any, Number]],
        terminal: Number = 0,
    ) -> "StepProfile":
        """Sum of indicator pieces ``value * 1[start, end)`` over [0, T)."""
        horizon = as_time(horizon)
        pieces = []
        for start, end, value in intervals:
            start, end = as_time(start), as_time(end)
            if not 0 <= start <= end <= horizon:
                raise BadInterval(
                    ErrorMessages.format_error(
                        ErrorMessages.BAD_INTERVAL, start, end, horizon
                    )
                )
            if start < end:
                pieces.append((start, end, value))
        cuts = sorted({Fraction(0), horizon} | {p[0] for p in pieces} | {p[1] for p in pieces})
        values = []
        for left, right in zip(cuts, cuts[1:]):
            covering = [v for s, e, v in pieces if s <= left and right <= e]
            values.append(sum(covering[1:], covering[0]) if covering else 0)
        return cls(tuple(cuts), tuple(values), terminal).normalized()

    @property
    def horizon(self) -> Fraction:
        return self.breakpoints[-1]

    @property
    def piece_count(self) -> int:
        return len(self.values)

    def value_at(self, t: Number) -> Number:
        t = as_time(t)
        if not 0 <= t <= self.horizon:
            raise BadInterval(
                ErrorMessages.format_error(ErrorMessages.OUT_OF_RANGE, t, self.horizon)
            )
        if t == self.horizon:
            return self.terminal
        return self.values[bisect_right(self.breakpoints, t) - 1]

    def pieces(self) -> List[Piece]:
        return list(zip(self.breakpoints, self.breakpoints[1:], self.values))

    def normalized(self) -> "StepProfile":
        """Merge adjacent pieces carrying equal values."""
        breakpoints = [self.breakpoints[0]]
        values: List[Number] = []
        for right, value in zip(self.breakpoints[1:], self.values):
            if values and values[-1] == value:
                breakpoints[-1] = right
            else:
                values.append(value)
                breakpoints.append(right)
        return StepProfile(tuple(breakpoints), tuple(values), self.terminal)

    def combine(
        self, other: "StepProfile", op: Callable[[Number, Number], Number]
    ) -> "StepProfile":
        if self.horizon != other.horizon:
            raise DimensionMismatch(
                ErrorMessages.format_error(
                    ErrorMessages.MISMATCH, self.horizon, other.horizon
                )
            )
        cuts = sorted(set(self.breakpoints) | set(other.breakpoints))
        values = tuple(op(self.value_at(t), other.value_at(t)) for t in cuts[:-1])
        return StepProfile(
            tuple(cuts), values, op(self.terminal, other.terminal)
        ).normalized()

    def __add__(self, other: "StepProfile") -> "StepProfile":
        return self.combine(other, lambda a, b: a + b)

    def __sub__(self, other: "StepProfile") -> "StepProfile":
        return self.combine(other, lambda a, b: a - b)

    def scale(self, factor: Number) -> "StepProfile":
        return StepProfile(
            self.breakpoints,
            tuple(factor * v for v in self.values),
            factor * self.terminal,
        ).normalized()

    def blend(self, other: "StepProfile", weight: Number) -> "StepProfile":
        """Convex combination ``(1 - weight) * self + weight * other``."""
        return self.combine(other, lambda a, b: (1 - weight) * a + weight * b)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "breakpoints": [format_number(b) for b in self.breakpoints],
            "values": [_json_number(v) for v in self.values],
            "terminal": _json_number(self.terminal),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "StepProfile":
        return cls(
            tuple(Fraction(b) for b in data["breakpoints"]),
            tuple(_read_number(v) for v in data["values"]),
            _read_number(data["terminal"]),
        )


def _json_number(value: Number) -> Any:
    return value if isinstance(value, float) else format_number(value)


def _read_number(value: Any) -> Number:
    return parse_number(value) if isinstance(value, str) else as_exact(value)


def time_integral(f: StepProfile, a: Number, b: Number) -> Number:
    """Exact integral of ``f`` over ``[a, b]``."""
    a, b = as_time(a), as_time(b)
    if a > b or a < 0 or b > f.horizon:
        raise BadInterval(
            ErrorMessages.format_error(ErrorMessages.BAD_INTERVAL, a, b, f.horizon)
        )
    total: Number = 0
    for start, end, value in f.pieces():
        overlap = min(end, b) - max(start, a)
        if overlap > 0:
            total += value * overlap
    return total


def l2_distance(f: StepProfile, g: StepProfile) -> float:
    """L² distance on the merged partition; the value at T has measure zero."""
    if f.horizon != g.horizon:
        raise DimensionMismatch(
            ErrorMessages.format_error(ErrorMessages.MISMATCH, f.horizon, g.horizon)
        )
    cuts = sorted(set(f.breakpoints) | set(g.breakpoints))
    squared = sum(
        (f.value_at(start) - g.value_at(start)) ** 2 * (end - start)
        for start, end in zip(cuts, cuts[1:])
    )
    return math.sqrt(float(squared))
