"""Report, table and plot files written by the command line."""

import csv
from collections import defaultdict
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from mfg_switch.flow.decision_plan import DecisionPlan
from mfg_switch.flow.eps_paths import EpsPath
from mfg_switch.network.topology import Node
from mfg_switch.profiles.mass_field import MassField
from mfg_switch.profiles.step_profile import StepProfile
from mfg_switch.solver.value_table import ValueTable
from mfg_switch.utilities.constants import (
    ARGMIN_FILE,
    MASS_FILE,
    PLAN_FILE,
    PLOT_FILE,
    REPORT_FILE,
    VALUE_FILE,
)
from mfg_switch.utilities.errors import ParseError
from mfg_switch.utilities.exact import format_number, parse_number
from mfg_switch.utilities.json_encoder import dumps

PlotRow = Sequence[Any]


def _decimal(value: Union[Fraction, float]) -> str:
    return repr(float(value))


def _write_rows(path: Path, header: Sequence[str], rows: List[Sequence[Any]]) -> Path:
    with path.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def write_report(out: Path, payload: Dict[str, Any]) -> Path:
    path = out / REPORT_FILE
    path.write_text(dumps(payload))
    return path


def write_value_csv(out: Path, table: ValueTable) -> Path:
    rows = [
        (index, bits, _decimal(t), repr(value))
        for index, bits, t, value in table.to_rows()
    ]
    return _write_rows(out / VALUE_FILE, ("node", "bits", "t", "value"), rows)


def write_argmin_csv(out: Path, table: ValueTable) -> Path:
    rows = [
        (node, Node(node, table.size).label, _decimal(t), succ, Node(succ, table.size).label, format_number(tau))
        for node, t, succ, tau in table.argmin_rows()
    ]
    return _write_rows(
        out / ARGMIN_FILE, ("node", "bits", "t", "succ", "succ_bits", "tau"), rows
    )


def write_mass_csv(out: Path, rho: MassField) -> Path:
    """One row per piece and one terminal row (start = end = T) per node, exact text."""
    rows = []
    for index, profile in enumerate(rho.profiles):
        bits = Node(index, rho.size).label
        for start, end, value in profile.pieces():
            rows.append((index, bits, format_number(start), format_number(end), format_number(value)))
        horizon = format_number(rho.horizon)
        rows.append((index, bits, horizon, horizon, format_number(profile.terminal)))
    return _write_rows(out / MASS_FILE, ("node", "bits", "start", "end", "value"), rows)


def read_mass_csv(path: Path) -> MassField:
    """Inverse of ``write_mass_csv``."""
    with Path(path).open(newline="") as f:
        records = list(csv.DictReader(f))
    if not records:
        raise ParseError(f"{path} holds no mass rows")
    try:
        size = len(records[0]["bits"])
        pieces: Dict[int, List[Dict[str, Any]]] = defaultdict(list)
        for record in records:
            pieces[int(record["node"])].append(record)
        horizon = max(Fraction(r["end"]) for r in records)
        profiles = []
        for index in range(2**size):
            rows = pieces.get(index, [])
            body = [r for r in rows if Fraction(r["start"]) < Fraction(r["end"])]
            terminal = [r for r in rows if Fraction(r["start"]) == Fraction(r["end"])]
            if not body or len(terminal) != 1:
                raise ParseError(f"Node {index} is missing pieces or its terminal row in {path}")
            body.sort(key=lambda r: Fraction(r["start"]))
            profiles.append(
                StepProfile(
                    tuple(Fraction(r["start"]) for r in body) + (Fraction(body[-1]["end"]),),
                    tuple(parse_number(r["value"]) for r in body),
                    parse_number(terminal[0]["value"]),
                )
            )
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
        raise ParseError(f"Malformed mass file {path}: {e}", e) from e
    return MassField(size, horizon, tuple(profiles))


def write_plan(out: Path, plan: DecisionPlan, paths: List[EpsPath]) -> Path:
    path = out / PLAN_FILE
    payload = {
        "decisions": [
            {
                **record,
                "t": format_number(record["t"]),
                "targets": [
                    {**target, "tau": format_number(target["tau"]), "lambda": format_number(target["lambda"])}
                    for target in record["targets"]
                ],
            }
            for record in plan.to_records()
        ],
        "paths": [p.to_dict() for p in paths],
    }
    path.write_text(dumps(payload))
    return path


def value_plot_rows(table: ValueTable) -> List[PlotRow]:
    return [(index, bits, _decimal(t), "value", repr(v)) for index, bits, t, v in table.to_rows()]


def mass_plot_rows(rho: MassField, quantity: str = "mass") -> List[PlotRow]:
    rows: List[PlotRow] = []
    for index, profile in enumerate(rho.profiles):
        bits = Node(index, rho.size).label
        for start, _, value in profile.pieces():
            rows.append((index, bits, _decimal(start), quantity, _decimal(value)))
        rows.append((index, bits, _decimal(rho.horizon), quantity, _decimal(profile.terminal)))
    return rows


def write_plot_csv(out: Path, rows: List[PlotRow]) -> Path:
    """Long-format table (node, bits, t, quantity, value) for external plotting."""
    return _write_rows(out / PLOT_FILE, ("node", "bits", "t", "quantity", "value"), rows)
