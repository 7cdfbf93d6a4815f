"""Диаграммы коммуникаций (DOT) и извлечение ToolBus-скриптов."""

from psfcoord.emit.dot import emit_dot
from psfcoord.emit.graph import CommGraph, Edge, comm_graph
from psfcoord.emit.script import ProcessScript, ScriptModel, extract_model, extract_script


__all__ = [
    "CommGraph",
    "Edge",
    "ProcessScript",
    "ScriptModel",
    "comm_graph",
    "emit_dot",
    "extract_model",
    "extract_script",
]
