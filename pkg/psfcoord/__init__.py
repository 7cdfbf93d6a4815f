"""psfcoord: спецификации архитектур и ToolBus-приложений в алгебре процессов."""

__version__ = "0.1.0"
