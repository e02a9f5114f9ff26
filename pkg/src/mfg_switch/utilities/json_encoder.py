"""JSON encoder for solver reports."""

import json
from enum import Enum
from fractions import Fraction
from pathlib import Path

import numpy as np
from pydantic import BaseModel


class MfgJSONEncoder(json.JSONEncoder):
    """Custom JSON encoder for solver objects and numeric types."""

    def default(self, obj):
        if isinstance(obj, BaseModel):
            return obj.model_dump()
        elif isinstance(obj, Fraction):
            return float(obj)
        elif isinstance(obj, np.integer):
            return int(obj)
        elif isinstance(obj, np.floating):
            return float(obj)
        elif isinstance(obj, np.ndarray):
            return obj.tolist()
        elif isinstance(obj, (Enum, Path)):
            return str(obj)
        elif isinstance(obj, (set, frozenset)):
            return sorted(obj)
        elif hasattr(obj, "to_dict"):
            return obj.to_dict()

        return super().default(obj)


def dumps(payload) -> str:
    """Deterministic JSON text: sorted keys, fixed indentation."""
    return json.dumps(payload, cls=MfgJSONEncoder, sort_keys=True, indent=2) + "\n"
