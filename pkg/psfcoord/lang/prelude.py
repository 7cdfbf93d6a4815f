"""Встроенная библиотека модулей (прелюдия).

Модули архитектурной библиотеки и библиотеки ToolBus, на которые ссылаются
спецификации: ``ArchitectureTypes``, ``ArchitecturePrimitives``, ``Architecture``,
``ToolBusPrimitives``, ``NewTool``, ``NewToolBus``.

Окружения устроены минимально: ``ArchitectureControl``/``ToolBusControl`` инертны
(видны на диаграммах, переходов не дают), ``ArchitectureShutdown`` принимает
``snd-quit``, ``ToolBusShutdown`` принимает ``snd-tb-shutdown``; после этого
выполняется ``system-terminated`` и вся система останавливается.
"""

from __future__ import annotations

from functools import lru_cache

from psfcoord.lang.ast import Spec
from psfcoord.lang.parser import parse_spec


#: Процесс-окружение -> уровень окружения (задает множество инкапсуляции)
ENVIRONMENT_PROCESSES = {"Architecture": "architecture", "ToolBus": "toolbus"}

ARCHITECTURE_NODES = ("ArchitectureControl", "ArchitectureShutdown")
TOOLBUS_NODES = ("ToolBusControl", "ToolBusShutdown")

PRELUDE_SOURCE = """\
-- базовые сорта и встроенные функции данных
data module ArchitectureTypes
begin
  exports
  begin
    sorts
      ID DATA BOOLEAN NAT
    functions
      true : -> BOOLEAN
      false : -> BOOLEAN
      ^0 : -> NAT
      succ : NAT -> NAT
      pred : NAT -> NAT
      nat : NAT -> NAT
      gt : NAT # NAT -> BOOLEAN
      eq : DATA # DATA -> BOOLEAN
      tbterm : DATA -> DATA
  end
end ArchitectureTypes

process module ArchitecturePrimitives
begin
  exports
  begin
    atoms
      snd : ID # ID # DATA
      rec : ID # ID # DATA
      snd-quit
      rec-quit
      system-terminated
  end
  imports
    ArchitectureTypes
end ArchitecturePrimitives

process module Architecture
begin
  parameters System
  begin
    processes
      System
  end System
  exports
  begin
    processes
      Architecture
      ArchitectureControl
      ArchitectureShutdown
  end
  imports
    ArchitecturePrimitives
  definitions
    Architecture =
      System || ArchitectureControl || ArchitectureShutdown
    ArchitectureControl =
      delta
    ArchitectureShutdown =
      rec-quit . system-terminated
end Architecture

process module ToolBusPrimitives
begin
  exports
  begin
    atoms
      tb-snd-msg : ID # ID # DATA
      tb-rec-msg : ID # ID # DATA
      tb-rec-event : ID # DATA
      tb-snd-ack-event : ID # DATA
      tb-snd-do : ID # DATA
      tb-snd-eval : ID # DATA
      tb-rec-value : ID # DATA
      tooltb-snd-event : DATA
      tooltb-rec-ack-event : DATA
      tooltb-rec : DATA
      tooltb-snd-value : DATA
      snd-tb-shutdown
      tb-rec-shutdown
      system-terminated
  end
  imports
    ArchitectureTypes
end ToolBusPrimitives

process module NewTool
begin
  parameters Tool
  begin
    processes
      Tool
  end Tool
  exports
  begin
    processes
      TBProcess
  end
  imports
    ToolBusPrimitives
  definitions
    TBProcess =
      Tool
end NewTool

process module NewToolBus
begin
  parameters Application
  begin
    processes
      Application
  end Application
  exports
  begin
    processes
      ToolBus
      ToolBusControl
      ToolBusShutdown
  end
  imports
    ToolBusPrimitives
  definitions
    ToolBus =
      Application || ToolBusControl || ToolBusShutdown
    ToolBusControl =
      delta
    ToolBusShutdown =
      tb-rec-shutdown . system-terminated
end NewToolBus
"""


@lru_cache(maxsize=1)
def load_prelude() -> Spec:
    """Разобранные модули прелюдии (кэшируются на процесс)."""
    spec = parse_spec(PRELUDE_SOURCE, "<prelude>")
    return Spec(spec.modules, prelude_loaded=True, source="<prelude>")
