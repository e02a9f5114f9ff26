from pathlib import Path
from typing import Optional

import click

from mfg_switch.cli.config import RunConfig
from mfg_switch.cli.run import EXIT_INPUT_ERROR, run
from mfg_switch.utilities.errors import MfgSwitchError
from mfg_switch.utilities.events import (
    EquilibriumFinishedEvent,
    Event,
    IterationCompletedEvent,
    RefinementStepEvent,
    solver_events,
)
from mfg_switch.utilities.logger import Logger
from mfg_switch.utilities.printer import Printer


@click.group()
@click.version_option(package_name="mfg-switch")
def mfg_switch():
    """Time-dependent switching mean-field game solver."""


def _forward(logger: Logger):
    def receiver(sender, event: Event):
        if isinstance(event, IterationCompletedEvent):
            logger.log("info", f"Iteration {event.iteration}: residual {event.residual:.3e}")
        elif isinstance(event, EquilibriumFinishedEvent):
            logger.log(
                "success" if event.certified else "warning",
                f"Equilibrium search finished after {event.iterations} iterations "
                f"(certified={event.certified}, residual={event.residual:.3e})",
            )
        elif isinstance(event, RefinementStepEvent):
            distance = "n/a" if event.distance is None else f"{event.distance:.3e}"
            logger.log("info", f"m={event.m}: certified={event.certified}, distance {distance}")

    return receiver


def _execute(
    command: str,
    config_path: Optional[str],
    out: Optional[str],
    quiet: bool,
    mass: Optional[str] = None,
):
    logger = Logger(verbose=not quiet)
    try:
        config = RunConfig.load(config_path) if config_path else None
    except (MfgSwitchError, OSError) as e:
        Printer().print(f"Error: {type(e).__name__}: {e}", color="red")
        raise SystemExit(EXIT_INPUT_ERROR)

    with solver_events.connected_to(_forward(logger)):
        code = run(
            config,
            command,
            Path(out) if out else None,
            Path(mass) if mass else None,
            logger,
        )
    raise SystemExit(code)


config_option = click.option(
    "--config", "config_path", type=click.Path(), required=True, help="Path to the JSON run configuration"
)
optional_config_option = click.option(
    "--config", "config_path", type=click.Path(), default=None, help="Optional JSON run configuration"
)
out_option = click.option("--out", type=click.Path(), default=None, help="Output directory")
quiet_option = click.option("--quiet", is_flag=True, help="Only print errors")
mass_option = click.option(
    "--mass",
    type=click.Path(),
    default=None,
    help="Mass field (mass.csv or JSON) to respond to; defaults to the static initial field",
)


@mfg_switch.command("solve-value")
@config_option
@out_option
@quiet_option
@mass_option
def solve_value(config_path, out, quiet, mass):
    """Solve the value function against a mass field."""
    _execute("solve-value", config_path, out, quiet, mass)


@mfg_switch.command("best-response")
@config_option
@out_option
@quiet_option
@mass_option
def best_response(config_path, out, quiet, mass):
    """Compute the uniform ε-best response to a mass field."""
    _execute("best-response", config_path, out, quiet, mass)


@mfg_switch.command()
@config_option
@out_option
@quiet_option
def equilibrium(config_path, out, quiet):
    """Search for a certified ε-mean-field equilibrium."""
    _execute("equilibrium", config_path, out, quiet)


@mfg_switch.command("refine-epsilon")
@config_option
@out_option
@quiet_option
def refine_epsilon(config_path, out, quiet):
    """Solve for equilibria over a sequence of partitions."""
    _execute("refine-epsilon", config_path, out, quiet)


@mfg_switch.command("verify-appendix-a")
@optional_config_option
@out_option
@quiet_option
def verify_reference_instances(config_path, out, quiet):
    """Reproduce the fixed-instant reference solutions."""
    _execute("verify-appendix-a", config_path, out, quiet)


@mfg_switch.command("check-monotonicity")
@optional_config_option
@out_option
@quiet_option
def check_monotonicity(config_path, out, quiet):
    """Sample the monotonicity inequalities on a fixed-instant instance."""
    _execute("check-monotonicity", config_path, out, quiet)


if __name__ == "__main__":
    mfg_switch()
