"""The Boolean lattice of visit strings and its switching paths."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import FrozenSet, List, Sequence, Tuple

import networkx as nx

from mfg_switch.utilities.errors import (
    DimensionMismatch,
    EmptyResult,
    ErrorMessages,
    NotAPath,
)
from mfg_switch.utilities.exact import as_time


@dataclass(frozen=True, order=True)
class Node:
    """A visit string p in {0,1}^N.

    ``index`` is the binary encoding with the first component as the least
    significant bit, so ``(1, 0, 0)`` has index 1 and ``(0, 1, 1)`` index 6.
    """

    index: int
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"Network size must be positive, got {self.size}")
        if not 0 <= self.index < 2**self.size:
            raise ValueError(
                f"Node index {self.index} outside [0, {2**self.size - 1}]"
            )

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "Node":
        if not bits:
            raise ValueError("A node needs at least one component")
        index = 0
        for position, bit in enumerate(bits):
            if bit not in (0, 1):
                raise ValueError(f"Component {position} is {bit}, expected 0 or 1")
            index |= int(bit) << position
        return cls(index, len(bits))

    @classmethod
    def from_label(cls, label: str) -> "Node":
        return cls.from_bits([int(c) for c in label])

    @classmethod
    def origin(cls, size: int) -> "Node":
        return cls(0, size)

    @classmethod
    def target(cls, size: int) -> "Node":
        return cls(2**size - 1, size)

    @property
    def bits(self) -> Tuple[int, ...]:
        return tuple((self.index >> i) & 1 for i in range(self.size))

    @property
    def label(self) -> str:
        return "".join(str(b) for b in self.bits)

    @property
    def is_target(self) -> bool:
        return self.index == 2**self.size - 1

    @property
    def zeros(self) -> int:
        return self.size - ones_count(self)

    def to_dict(self) -> dict:
        return {"id": self.index, "bits": self.label}

    def __str__(self) -> str:
        return self.label


def all_nodes(size: int) -> List[Node]:
    return [Node(i, size) for i in range(2**size)]


def ones_count(p: Node) -> int:
    return bin(p.index).count("1")


def successors(p: Node) -> FrozenSet[Node]:
    """Nodes reached by flipping exactly one 0-component of ``p`` to 1."""
    return frozenset(
        Node(p.index | (1 << i), p.size)
        for i in range(p.size)
        if not p.index & (1 << i)
    )


def dominates(upper: Node, lower: Node) -> bool:
    """True when every component set in ``lower`` is also set in ``upper``."""
    return lower.index & ~upper.index == 0


@lru_cache(maxsize=16)
def lattice_graph(size: int) -> nx.DiGraph:
    graph = nx.DiGraph()
    for p in all_nodes(size):
        graph.add_node(p.index, bits=p.label)
        for q in successors(p):
            graph.add_edge(p.index, q.index)
    return graph


def levels_backward(size: int) -> List[List[Node]]:
    """Topological generations from the target down to the origin."""
    generations = nx.topological_generations(lattice_graph(size))
    return [
        [Node(i, size) for i in sorted(generation)]
        for generation in reversed(list(generations))
    ]


def enumerate_node_paths(start: Node, end: Node) -> List[Tuple[Node, ...]]:
    """All successor sequences from ``start`` to ``end`` in lexicographic order."""
    if start.size != end.size:
        raise DimensionMismatch(
            ErrorMessages.format_error(ErrorMessages.MISMATCH, start.size, end.size)
        )
    if not dominates(end, start):
        raise EmptyResult(
            ErrorMessages.format_error(ErrorMessages.NOT_DOMINATED, end, start)
        )
    if start == end:
        return [(start,)]
    paths = nx.all_simple_paths(lattice_graph(start.size), start.index, end.index)
    return sorted(tuple(Node(i, start.size) for i in path) for path in paths)


@dataclass(frozen=True)
class SwitchPath:
    """A control (r, σ, π): nodes p_0..p_r entered at times t_0 < ... < t_r."""

    nodes: Tuple[Node, ...]
    times: Tuple[Fraction, ...]
    horizon: Fraction

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(as_time(t) for t in self.times))
        object.__setattr__(self, "horizon", as_time(self.horizon))
        if not self.nodes or len(self.nodes) != len(self.times):
            raise NotAPath("A switching path needs one time per node")
        for previous, current in zip(self.nodes, self.nodes[1:]):
            if current not in successors(previous):
                raise NotAPath(
                    ErrorMessages.format_error(
                        ErrorMessages.NOT_SUCCESSOR, current, previous
                    )
                )
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise NotAPath(f"Switching times must increase strictly: {self.times}")
        if self.times[0] < 0 or self.times[-1] > self.horizon:
            raise NotAPath(f"Switching times must lie in [0, {self.horizon}]")
        if not self.nodes[-1].is_target and self.times[-1] != self.horizon:
            raise NotAPath("A path that misses targets must end at the horizon")

    @property
    def switch_count(self) -> int:
        return len(self.nodes) - 1
