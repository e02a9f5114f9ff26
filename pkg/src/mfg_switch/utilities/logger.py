from datetime import datetime

from pydantic import BaseModel, Field, PrivateAttr

from mfg_switch.utilities.printer import Printer

_LEVEL_COLORS = {"error": "red", "warning": "yellow", "success": "bold_green"}


class Logger(BaseModel):
    verbose: bool = Field(default=False)
    _printer: Printer = PrivateAttr(default_factory=Printer)

    def log(self, level: str, message: str, color: str = ""):
        if self.verbose:
            timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
            self._printer.print(
                f"[{timestamp}][{level.upper()}]: {message}",
                color=color or _LEVEL_COLORS.get(level.lower(), "bold_yellow"),
            )
