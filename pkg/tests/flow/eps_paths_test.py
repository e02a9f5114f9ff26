from fractions import Fraction

import pytest

from mfg_switch.flow.eps_paths import EpsPath, enumerate_eps_paths, rounding_diagnostics
from mfg_switch.network.topology import Node
from mfg_switch.utilities.errors import PathExplosion

F = Fraction


def n(index: int) -> Node:
    return Node(index, 2)


def test_symmetric_successors_give_mirrored_paths(static_table, part, initial):
    paths = enumerate_eps_paths(static_table, part, initial)
    assert paths == [
        EpsPath((n(0), n(1), n(3)), (0, F(13, 8), 2), 2),
        EpsPath((n(0), n(2), n(3)), (0, F(13, 8), 2), 2),
    ]
    assert all(p.instants[1] - p.instants[0] >= part.epsilon for p in paths)


def test_path_records(static_table, part, initial):
    record = enumerate_eps_paths(static_table, part, initial)[0].to_dict()
    assert record == {
        "nodes": [0, 1, 3],
        "bits": ["00", "10", "11"],
        "instants": ["0", "13/8", "2"],
    }


def test_path_explosion(static_table, part, initial):
    with pytest.raises(PathExplosion):
        enumerate_eps_paths(static_table, part, initial, max_paths=1)


def test_rounding_diagnostics(static_table, part, initial):
    paths = enumerate_eps_paths(static_table, part, initial)
    diagnostics = rounding_diagnostics(static_table, part, paths)
    assert 0.01 < diagnostics.max_rounding_shift < float(part.epsilon) / 2
    assert diagnostics.lifted_instants == 0
    assert diagnostics.changed_decisions == 0
