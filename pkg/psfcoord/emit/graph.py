"""Граф коммуникаций архитектуры или ToolBus-приложения (узлы и каналы диаграмм)."""

from __future__ import annotations

from dataclasses import dataclass, field

from psfcoord.data.terms import DataTerm, Term, render_term
from psfcoord.lang.prelude import ARCHITECTURE_NODES, TOOLBUS_NODES
from psfcoord.lang.resolve import FlatSpec
from psfcoord.refine.refine import NAMING, component_modules
from psfcoord.semantics.actions import Conn, Msg, ToolSide
from psfcoord.semantics.process import iter_actions
from psfcoord.utils.log_config import get_logger


logger = get_logger(__name__)

COMPONENT, CONTROL, SHUTDOWN = "component", "control", "shutdown"
MSG, EVENT, DO_EVAL = "msg", "event", "do-eval"

_CHANNEL_OF = {
    "tb-rec-event": EVENT,
    "tb-snd-ack-event": EVENT,
    "tb-snd-do": DO_EVAL,
    "tb-snd-eval": DO_EVAL,
    "tb-rec-value": DO_EVAL,
}


@dataclass(frozen=True, order=True)
class Edge:
    source: str
    target: str
    channel: str = MSG
    directed: bool = True


@dataclass
class CommGraph:
    """Узлы ``(имя, вид)`` и ребра без повторов ``(откуда, куда, канал)``."""

    name: str = "Architecture"
    nodes: list[tuple[str, str]] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)

    def node_names(self) -> list[str]:
        return [name for name, _ in self.nodes]

    def add_node(self, name: str, kind: str = COMPONENT) -> None:
        if name not in self.node_names():
            self.nodes.append((name, kind))

    def add_edge(self, source: str, target: str, channel: str = MSG) -> None:
        """Добавить канал; встречный канал того же вида превращает ребро в двунаправленное."""
        if source == target:
            return
        for index, edge in enumerate(self.edges):
            if edge.channel != channel:
                continue
            if (edge.source, edge.target) == (source, target):
                return
            if (edge.source, edge.target) == (target, source):
                if edge.directed:
                    low, high = sorted((source, target))
                    self.edges[index] = Edge(low, high, channel, directed=False)
                return
        self.edges.append(Edge(source, target, channel))


def identifier_key(name: str) -> str:
    """``module-manager`` и ``ModuleManager`` дают один ключ."""
    return name.replace("-", "").lower()


def _resolve_id(term: Term, nodes: dict[str, str]) -> str | None:
    if not isinstance(term, DataTerm):
        return None
    node = nodes.get(identifier_key(term.name))
    if node is None:
        logger.debug("Идентификатор %s не соответствует компоненте", render_term(term))
    return node


def _is_toolbus(flat: FlatSpec) -> bool:
    prefix = NAMING.constrained_name("")
    return flat.level() == "toolbus" or bool(flat.tool_instances()) or any(n.startswith(prefix) for n, _ in flat.defs)


def architecture_graph(flat: FlatSpec, name: str | None = None) -> CommGraph:
    graph = CommGraph(name or flat.root or "Architecture")
    components = component_modules(flat)
    for module in components:
        graph.add_node(module, COMPONENT)
    graph.add_node(ARCHITECTURE_NODES[0], CONTROL)
    graph.add_node(ARCHITECTURE_NODES[1], SHUTDOWN)

    by_key = {identifier_key(m): m for m in components}
    for keys in components.values():
        for key in keys:
            for label in iter_actions(flat.defs[key].body):
                if isinstance(label.payload, Conn):
                    source = _resolve_id(label.payload.source, by_key)
                    target = _resolve_id(label.payload.target, by_key)
                    if source and target:
                        graph.add_edge(source, target, MSG)
    return graph


def toolbus_graph(flat: FlatSpec, name: str | None = None) -> CommGraph:
    from psfcoord.toolbus.application import assemble

    app = assemble(flat)
    graph = CommGraph(name or app.root)
    for component in app.components:
        graph.add_node(component.bus.name, COMPONENT)
        graph.add_node(component.tool.name, COMPONENT)
    graph.add_node(TOOLBUS_NODES[0], CONTROL)
    graph.add_node(TOOLBUS_NODES[1], SHUTDOWN)

    by_key = {identifier_key(c.component): c.bus.name for c in app.components}
    for component in app.components:
        for definition in (component.bus, *component.helpers):
            for label in iter_actions(definition.body):
                if label.name == "tb-snd-msg" and isinstance(label.payload, Msg):
                    source = _resolve_id(label.payload.source, by_key)
                    target = _resolve_id(label.payload.target, by_key)
                    if source and target:
                        graph.add_edge(source, target, MSG)
                elif label.name in _CHANNEL_OF and isinstance(label.payload, ToolSide):
                    graph.add_edge(component.bus.name, component.tool.name, _CHANNEL_OF[label.name])
                    graph.add_edge(component.tool.name, component.bus.name, _CHANNEL_OF[label.name])
    return graph


def comm_graph(flat: FlatSpec, name: str | None = None) -> CommGraph:
    """Граф коммуникаций; уровень (архитектура или ToolBus) определяется по спецификации.

    Узлы: компоненты и узлы окружения. Ребра архитектуры - по соединениям ``a >> b``,
    ребра ToolBus - по ``tb-snd-msg`` и по парам ``P``/``T`` (вид канала: event, do-eval).
    """
    graph = toolbus_graph(flat, name) if _is_toolbus(flat) else architecture_graph(flat, name)
    logger.info("Граф %s: узлов %d, ребер %d", graph.name, len(graph.nodes), len(graph.edges))
    return graph
