"""Pipelines behind the command-line subcommands."""

import json
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError

from mfg_switch.cli.config import MonotonicityConfig, RunConfig
from mfg_switch.cli.writers import (
    mass_plot_rows,
    read_mass_csv,
    value_plot_rows,
    write_argmin_csv,
    write_mass_csv,
    write_plan,
    write_plot_csv,
    write_report,
    write_value_csv,
)
from mfg_switch.equilibrium.fixed_point import best_response, find_equilibrium
from mfg_switch.equilibrium.monotonicity import check_monotonicity
from mfg_switch.equilibrium.reference_checks import verify_reference_instances
from mfg_switch.equilibrium.refinement import refine_epsilon
from mfg_switch.profiles.mass_field import MassField, field_l2_distance
from mfg_switch.solver.value_solver import solve_value
from mfg_switch.solver.value_table import ValueTable
from mfg_switch.utilities.errors import MfgSwitchError, ParseError
from mfg_switch.utilities.exact import format_number
from mfg_switch.utilities.logger import Logger
from mfg_switch.utilities.printer import Printer

COMMANDS = (
    "solve-value",
    "best-response",
    "equilibrium",
    "refine-epsilon",
    "verify-appendix-a",
    "check-monotonicity",
)
CONFIG_OPTIONAL = ("verify-appendix-a", "check-monotonicity")

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_UNCERTIFIED = 2


def _load_field(config: RunConfig, mass_path: Optional[Path]) -> MassField:
    if mass_path is None:
        return config.initial_field()
    if mass_path.suffix == ".json":
        try:
            return MassField.from_dict(json.loads(mass_path.read_text()))
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Malformed mass file {mass_path}: {e!r}", e) from e
    return read_mass_csv(mass_path)


def _table_summary(table: ValueTable) -> Dict[str, Any]:
    return {
        "mode": table.mode,
        "steps": table.grid.steps,
        "grid_step": format_number(table.grid.step),
        "min_gap": None if table.min_gap is None else format_number(table.min_gap),
        "phi_single_valued": table.phi_single_valued,
        "values_at_zero": {
            bits: value for index, bits, t, value in table.to_rows() if t == 0
        },
    }


def _solve_value(config: RunConfig, out: Path, mass_path: Optional[Path], logger: Logger) -> int:
    rho = _load_field(config, mass_path)
    table = solve_value(
        rho, config.cost_params(), config.grid(), config.solver.mode, config.solver.check_resolution
    )
    write_value_csv(out, table)
    write_argmin_csv(out, table)
    write_plot_csv(out, value_plot_rows(table))
    write_report(out, {"command": "solve-value", **_table_summary(table)})
    logger.log("success", f"Value table written to {out}")
    return EXIT_OK


def _best_response(config: RunConfig, out: Path, mass_path: Optional[Path], logger: Logger) -> int:
    rho = _load_field(config, mass_path)
    response = best_response(
        rho,
        config.cost_params(),
        config.partition(),
        config.grid(),
        config.initial_field(),
        config.equilibrium_options(),
    )
    write_value_csv(out, response.table)
    write_argmin_csv(out, response.table)
    write_mass_csv(out, response.field)
    write_plan(out, response.plan, response.paths)
    write_plot_csv(out, value_plot_rows(response.table) + mass_plot_rows(response.field))
    write_report(
        out,
        {
            "command": "best-response",
            "paths": len(response.paths),
            "distance_to_input": field_l2_distance(rho, response.field),
            "diagnostics": response.diagnostics,
            **_table_summary(response.table),
        },
    )
    logger.log("success", f"Best response over {len(response.paths)} paths written to {out}")
    return EXIT_OK


def _equilibrium(config: RunConfig, out: Path, logger: Logger) -> int:
    report = find_equilibrium(
        config.cost_params(),
        config.initial_field(),
        config.partition(),
        config.grid(),
        config.equilibrium_options(),
    )
    write_mass_csv(out, report.rho)
    if report.plan is not None:
        write_plan(out, report.plan, report.paths)
    write_plot_csv(out, mass_plot_rows(report.rho))
    write_report(
        out,
        {
            "command": "equilibrium",
            "certified": report.certified,
            "iterations": report.iterations,
            "residual": report.residual,
            "trace": report.trace,
            "min_gap": report.min_gap,
            "phi_single_valued": report.phi_single_valued,
            "diagnostics": report.diagnostics,
            "certificate": None
            if report.certificate is None
            else report.certificate.model_dump(exclude={"plan", "paths"}),
            "piece_counts": list(report.rho.piece_counts()),
            "message": report.message,
        },
    )
    if not report.certified:
        logger.log("warning", f"No certified equilibrium: {report.message}")
        return EXIT_UNCERTIFIED
    logger.log("success", f"Certified equilibrium after {report.iterations} iterations")
    return EXIT_OK


def _refine_epsilon(config: RunConfig, out: Path, logger: Logger) -> int:
    report = refine_epsilon(
        config.cost_params(),
        config.initial_field(),
        config.refine.m_sequence,
        config.grid_divisor,
        config.equilibrium_options(),
    )
    last = report.steps[-1].report
    write_mass_csv(out, last.rho)
    rows = []
    for step in report.steps:
        rows.extend(mass_plot_rows(step.report.rho, quantity=f"mass_m{step.m}"))
    write_plot_csv(out, rows)
    write_report(
        out,
        {
            "command": "refine-epsilon",
            "steps": report.steps,
            "distances": report.distances,
            "distances_decreasing": report.distances_decreasing,
            "all_certified": report.all_certified,
        },
    )
    return EXIT_OK if report.all_certified else EXIT_UNCERTIFIED


def _verify_reference_instances(config: Optional[RunConfig], out: Path, logger: Logger) -> int:
    report = verify_reference_instances(seed=config.seed if config else 0)
    write_report(out, {"command": "verify-appendix-a", "passed": report.passed, "checks": report.checks})
    for check in report.checks:
        logger.log("success" if check.passed else "error", f"{check.name}: {check.actual}")
    return EXIT_OK if report.passed else EXIT_UNCERTIFIED


def _check_monotonicity(config: Optional[RunConfig], out: Path, logger: Logger) -> int:
    settings = config.monotonicity if config else MonotonicityConfig()
    report = check_monotonicity(
        settings.build_instance(),
        trials=settings.trials,
        rho0_samples=settings.rho0_samples,
        seed=config.seed if config else 0,
    )
    write_report(out, {"command": "check-monotonicity", "passed": report.passed, **report.model_dump()})
    for violation in report.violations:
        logger.log("error", violation)
    return EXIT_OK if report.passed else EXIT_UNCERTIFIED


def run(
    config: Optional[RunConfig],
    command: str,
    out: Optional[Path] = None,
    mass_path: Optional[Path] = None,
    logger: Optional[Logger] = None,
) -> int:
    """Execute ``command`` and write its artifacts to ``out``.

    Returns 0 on success, 2 when a result could not be certified or a check
    failed, and 1 on input errors. Error messages go to standard error.
    """
    logger = logger or Logger(verbose=False)
    if command not in COMMANDS:
        Printer().print(f"Error: unknown command {command}", color="red")
        return EXIT_INPUT_ERROR
    if config is None and command not in CONFIG_OPTIONAL:
        Printer().print(f"Error: {command} needs a configuration", color="red")
        return EXIT_INPUT_ERROR

    out = Path(out or (config.output_dir if config and config.output_dir else "output"))
    try:
        out.mkdir(parents=True, exist_ok=True)
        logger.log("info", f"Running {command}")
        if command == "verify-appendix-a":
            return _verify_reference_instances(config, out, logger)
        if command == "check-monotonicity":
            return _check_monotonicity(config, out, logger)
        assert config is not None
        if command == "solve-value":
            return _solve_value(config, out, mass_path, logger)
        if command == "best-response":
            return _best_response(config, out, mass_path, logger)
        if command == "equilibrium":
            return _equilibrium(config, out, logger)
        return _refine_epsilon(config, out, logger)
    except (MfgSwitchError, ValidationError, ValueError, OSError) as e:
        Printer().print(f"Error: {type(e).__name__}: {e}", color="red")
        return EXIT_INPUT_ERROR
