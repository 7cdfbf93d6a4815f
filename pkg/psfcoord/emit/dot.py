"""Вывод графа коммуникаций в DOT (раскладку делает dot)."""

from __future__ import annotations

import graphviz

from psfcoord.emit.graph import COMPONENT, DO_EVAL, EVENT, CommGraph


NODE_STYLE = {COMPONENT: "solid", "control": "dashed", "shutdown": "dotted"}
EDGE_COLOR = {EVENT: "blue", DO_EVAL: "darkgreen"}


def emit_dot(graph: CommGraph) -> str:
    """Текст ``digraph`` с узлами-эллипсами.

    Узлы и ребра упорядочены лексикографически, поэтому вывод побайтно стабилен.
    """
    dot = graphviz.Digraph(name=graph.name, graph_attr={"rankdir": "LR"})
    for name, kind in sorted(graph.nodes):
        dot.node(name, shape="ellipse", style=NODE_STYLE.get(kind, "solid"))
    for edge in sorted(graph.edges):
        attrs = {}
        if not edge.directed:
            attrs["dir"] = "both"
        if edge.channel in EDGE_COLOR:
            attrs["color"] = EDGE_COLOR[edge.channel]
        dot.edge(edge.source, edge.target, **attrs)
    return dot.source
