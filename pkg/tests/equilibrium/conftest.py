import pytest

from mfg_switch.costs.cost_model import CostParams
from mfg_switch.profiles.mass_field import MassField


@pytest.fixture
def congested_origin():
    """Two targets on [0, 2]; a heavy origin pushes agents out before T."""
    return CostParams(size=2, horizon=2, weights={0: 1.6}, free_flow_cost=0.1)


@pytest.fixture
def initial():
    return MassField.static(2, 2, {0: 1})
