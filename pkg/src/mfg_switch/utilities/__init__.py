from .errors import MfgSwitchError
from .exact import as_time
from .logger import Logger
from .printer import Printer

__all__ = ["Logger", "MfgSwitchError", "Printer", "as_time"]
