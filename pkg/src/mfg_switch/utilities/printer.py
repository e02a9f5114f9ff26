"""Utility for colored console output."""

from typing import Optional

import click

_STYLES = {
    "purple": {"fg": "magenta"},
    "red": {"fg": "red"},
    "bold_green": {"fg": "green", "bold": True},
    "bold_purple": {"fg": "magenta", "bold": True},
    "bold_blue": {"fg": "blue", "bold": True},
    "yellow": {"fg": "yellow"},
    "bold_yellow": {"fg": "yellow", "bold": True},
    "cyan": {"fg": "cyan"},
    "green": {"fg": "green"},
}


class Printer:
    """Handles colored output on standard error."""

    def print(self, content: str, color: Optional[str] = None):
        style = _STYLES.get(color or "")
        if style is None:
            click.echo(content, err=True)
        else:
            click.secho(content, err=True, **style)
