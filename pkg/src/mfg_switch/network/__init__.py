from .topology import (
    Node,
    SwitchPath,
    all_nodes,
    dominates,
    enumerate_node_paths,
    lattice_graph,
    levels_backward,
    ones_count,
    successors,
)

__all__ = [
    "Node",
    "SwitchPath",
    "all_nodes",
    "dominates",
    "enumerate_node_paths",
    "lattice_graph",
    "levels_backward",
    "ones_count",
    "successors",
]
