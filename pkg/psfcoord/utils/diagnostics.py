"""Вывод диагностик CLI: ``file:line:col: message`` с необязательным цветом.

Ошибка без позиции печатается с меткой ``error:``; предупреждение всегда несет метку ``warning:``.
"""

from __future__ import annotations

import os
from typing import TextIO

from psfcoord.errors import PsfCoordError


RESET, BOLD, RED, YELLOW = "\033[0m", "\033[1m", "\033[31m", "\033[33m"
COLOR_MODES = ("auto", "never", "always")


def use_color(stream: TextIO, mode: str = "auto") -> bool:
    """Раскрашивать ли вывод в поток.

    ``PSFCOORD_COLOR`` важнее переданного режима; неизвестное значение - как ``auto``.
    """
    mode = os.environ.get("PSFCOORD_COLOR", mode)
    if mode == "always":
        return True
    if mode == "never":
        return False
    isatty = getattr(stream, "isatty", None)
    return bool(isatty and isatty())


def _tag(kind: str, color: bool) -> str:
    if not color:
        return f"{kind}:"
    shade = RED if kind == "error" else YELLOW
    return f"{BOLD}{shade}{kind}:{RESET}"


def format_diagnostic(message: str, *, where: str | None = None, kind: str = "error", color: bool = False) -> str:
    if where is None:
        return f"{_tag(kind, color)} {message}"
    if kind != "error":
        return f"{where}: {_tag(kind, color)} {message}"
    location = f"{BOLD}{where}:{RESET}" if color else f"{where}:"
    text = f"{RED}{message}{RESET}" if color else message
    return f"{location} {text}"


def format_error(error: PsfCoordError, color: bool = False) -> str:
    where = str(error.pos) if error.pos is not None else None
    return format_diagnostic(error.message, where=where, color=color)


def report(stream: TextIO, message: str, *, kind: str = "error", where: str | None = None, mode: str = "auto") -> None:
    stream.write(format_diagnostic(message, where=where, kind=kind, color=use_color(stream, mode)) + "\n")
