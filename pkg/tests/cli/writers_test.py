import csv
import json
from fractions import Fraction

import pytest

from mfg_switch.cli.writers import (
    mass_plot_rows,
    read_mass_csv,
    write_mass_csv,
    write_plan,
    write_plot_csv,
    write_report,
)
from mfg_switch.flow.decision_plan import DecisionPlan
from mfg_switch.flow.eps_paths import EpsPath
from mfg_switch.network.topology import Node
from mfg_switch.profiles.mass_field import MassField
from mfg_switch.profiles.step_profile import StepProfile
from mfg_switch.utilities.errors import ParseError

F = Fraction


@pytest.fixture
def moving_field():
    return MassField(
        1,
        2,
        (
            StepProfile((0, F(3, 2), 2), (F(1, 3), 0), 0),
            StepProfile((0, F(3, 2), 2), (0, F(1, 3)), F(1, 3)),
        ),
    )


def test_mass_csv_keeps_exact_values(tmp_path, moving_field):
    path = write_mass_csv(tmp_path, moving_field)
    with path.open() as f:
        rows = list(csv.DictReader(f))
    assert rows[0] == {"node": "0", "bits": "0", "start": "0", "end": "3/2", "value": "1/3"}
    assert rows[2] == {"node": "0", "bits": "0", "start": "2", "end": "2", "value": "0"}
    assert read_mass_csv(path) == moving_field


def test_malformed_mass_csv(tmp_path):
    path = tmp_path / "mass.csv"
    path.write_text("node,bits,start,end,value\n0,0,0,2,1\n")
    with pytest.raises(ParseError):
        read_mass_csv(path)
    path.write_text("node,bits,start,end,value\n")
    with pytest.raises(ParseError):
        read_mass_csv(path)


def test_plot_rows_are_long_format(tmp_path, moving_field):
    rows = mass_plot_rows(moving_field, quantity="mass_m8")
    assert rows[0] == (0, "0", "0.0", "mass_m8", repr(1 / 3))
    path = write_plot_csv(tmp_path, rows)
    assert path.read_text().splitlines()[0] == "node,bits,t,quantity,value"


def test_plan_file(tmp_path):
    path = EpsPath((Node(0, 1), Node(1, 1)), (0, 2), 2)
    write_plan(tmp_path, DecisionPlan.uniform(1, [path]), [path])
    payload = json.loads((tmp_path / "plan.json").read_text())
    assert payload["decisions"][0]["targets"] == [
        {"succ": 1, "bits": "1", "tau": "2", "lambda": "1"}
    ]
    assert payload["paths"][0]["instants"] == ["0", "2"]


def test_report_is_deterministic(tmp_path):
    write_report(tmp_path, {"b": F(1, 2), "a": {3, 1}})
    assert (tmp_path / "report.json").read_text() == '{\n  "a": [\n    1,\n    3\n  ],\n  "b": 0.5\n}\n'
