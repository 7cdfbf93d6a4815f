"""Модуль настройки логирования для psfcoord.

Централизованная настройка логов для всех подпакетов:

* вывод в stderr (stdout занят артефактами CLI: трассами, DOT, скриптами);
* необязательная запись в файл ``psfcoord.log``;
* единый формат сообщений.

Основные компоненты:

* :func:`configure_logging` - глобальная настройка системы логирования
* :func:`get_logger` - получение логгера для модуля

Attributes:
    _LOG_CONFIGURED (bool): Флаг инициализации. Предотвращает повторную настройку.

Example:
    Использование в модуле::

        from psfcoord.utils.log_config import get_logger

        logger = get_logger(__name__)
        logger.info("Разобрано модулей: %d", 4)

    Настройка из entry point (CLI)::

        from pathlib import Path
        from psfcoord.utils.log_config import configure_logging

        configure_logging(level="DEBUG", log_dir=Path("logs"))

Note:
    При первом вызове :func:`get_logger` система настраивается автоматически
    с уровнем ``WARNING``: диагностики данных (например, насыщающий ``pred(^0)``)
    видны, а служебные INFO-сообщения нет.
"""

from __future__ import annotations

import logging
import sys
from logging import Logger
from pathlib import Path


#: Флаг инициализации системы логирования
_LOG_CONFIGURED = False

LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def configure_logging(
    level: str = "WARNING",
    log_dir: Path | None = None,
    log_to_stderr: bool = True,
    force: bool = False,
) -> None:
    """Глобальная настройка логов для всего пакета.

    Формат сообщений::

        2026-01-08 14:30:45 | WARNING  | psfcoord.data.terms | pred(^0) насыщен до ^0

    Args:
        level: Уровень логирования (``"DEBUG"``, ``"INFO"``, ``"WARNING"``, ...).
            При некорректном значении используется ``WARNING``.
        log_dir: Директория для файла ``psfcoord.log``; ``None`` - только консоль.
            Директория создается автоматически.
        log_to_stderr: Писать ли логи в stderr.
        force: Перенастроить, даже если логирование уже настроено
            (CLI вызывает с ``force=True`` после чтения конфига).

    Raises:
        OSError: Если не удается создать директорию или файл логов.
    """
    global _LOG_CONFIGURED
    if _LOG_CONFIGURED and not force:
        return

    root_logger = logging.getLogger()
    if force:
        for handler in list(root_logger.handlers):
            if getattr(handler, "_psfcoord", False):
                root_logger.removeHandler(handler)
                handler.close()

    handlers: list[logging.Handler] = []

    if log_to_stderr:
        handlers.append(logging.StreamHandler(sys.stderr))

    if log_dir is not None:
        log_dir.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_dir / "psfcoord.log", encoding="utf-8"))

    formatter = logging.Formatter(fmt=LOG_FORMAT, datefmt=DATE_FORMAT)
    for handler in handlers:
        handler.setFormatter(formatter)
        handler._psfcoord = True  # type: ignore[attr-defined]
        root_logger.addHandler(handler)

    # если передали что-то кривое, по умолчанию будет WARNING
    root_logger.setLevel(getattr(logging, str(level).upper(), logging.WARNING))

    _LOG_CONFIGURED = True


def get_logger(name: str) -> Logger:
    """Получить логгер с гарантированно настроенной конфигурацией.

    Args:
        name: Имя логгера, обычно ``__name__`` модуля.

    Returns:
        Logger: Настроенный экземпляр логгера.
    """
    if not _LOG_CONFIGURED:
        configure_logging()
    return logging.getLogger(name)
