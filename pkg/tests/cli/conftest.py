import json
from pathlib import Path

import pytest

HAND_INSTANCE = {
    "N": 2,
    "T": 2,
    "m": 8,
    "grid_divisor": 1,
    "weights": {"0": 1.6},
    "free_flow_cost": 0.1,
    "initial": {"0": 1},
    "solver": {"mode": "analytic"},
}


@pytest.fixture
def write_config(tmp_path):
    def write(**overrides) -> Path:
        path = tmp_path / "config.json"
        path.write_text(json.dumps({**HAND_INSTANCE, **overrides}))
        return path

    return write
