import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from pydantic import BaseModel

from mfg_switch.flow.eps_paths import EpsPath
from mfg_switch.network.topology import Node
from mfg_switch.utilities.json_encoder import MfgJSONEncoder, dumps


class Summary(BaseModel):
    name: str
    value: float


def encode(obj):
    return json.loads(json.dumps(obj, cls=MfgJSONEncoder))


def test_numeric_types():
    assert encode(Fraction(3, 4)) == 0.75
    assert encode(np.int64(5)) == 5
    assert encode(np.float32(0.5)) == 0.5
    assert encode(np.array([[1, 2], [3, 4]])) == [[1, 2], [3, 4]]


def test_models_sets_and_paths():
    assert encode(Summary(name="x", value=1.5)) == {"name": "x", "value": 1.5}
    assert encode(frozenset({2, 1})) == [1, 2]
    assert encode(Path("out/report.json")) == "out/report.json"


def test_objects_with_to_dict():
    path = EpsPath((Node(0, 1), Node(1, 1)), (0, 1), 1)
    assert encode(path) == {"nodes": [0, 1], "bits": ["0", "1"], "instants": ["0", "1"]}


def test_unsupported_type_raises():
    with pytest.raises(TypeError):
        json.dumps(object(), cls=MfgJSONEncoder)


def test_dumps_sorts_keys_and_ends_with_newline():
    text = dumps({"b": 1, "a": 2})
    assert text.index('"a"') < text.index('"b"')
    assert text.endswith("\n")
