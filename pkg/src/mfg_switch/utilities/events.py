from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Optional

from blinker import Signal

solver_events = Signal("solver_events")


@dataclass
class Event:
    type: str
    source: str
    timestamp: datetime = field(init=False)

    def __post_init__(self):
        self.timestamp = datetime.now()


@dataclass
class IterationCompletedEvent(Event):
    iteration: int
    residual: float


@dataclass
class EquilibriumFinishedEvent(Event):
    certified: bool
    iterations: int
    residual: float


@dataclass
class RefinementStepEvent(Event):
    m: int
    certified: bool
    distance: Optional[float] = None


def emit(sender: Any, event: Event) -> None:
    solver_events.send(sender, event=event)
