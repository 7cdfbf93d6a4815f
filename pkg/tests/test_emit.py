from psfcoord.emit.dot import emit_dot
from psfcoord.emit.graph import CONTROL, DO_EVAL, EVENT, MSG, SHUTDOWN, CommGraph, Edge, architecture_graph, comm_graph
from psfcoord.lang.resolve import load_flat

from tests.conftest import ARCH_SINGLE, COMPONENTS
from tests.helpers.dot_grammar import parse_dot


def single_graph():
    return architecture_graph(load_flat([ARCH_SINGLE]))


def test_single_architecture_graph():
    graph = single_graph()
    assert graph.name == "IDE"
    assert dict(graph.nodes) == {
        "Function": "component",
        "Editor": "component",
        "Compiler": "component",
        "ErrorViewer": "component",
        "ArchitectureControl": CONTROL,
        "ArchitectureShutdown": SHUTDOWN,
    }
    assert sorted(graph.edges) == [
        Edge("Compiler", "ErrorViewer", MSG, True),
        Edge("Compiler", "Function", MSG, False),
        Edge("Editor", "Function", MSG, False),
    ]


def test_opposite_channels_merge():
    graph = CommGraph()
    graph.add_edge("A", "B")
    graph.add_edge("A", "B")
    graph.add_edge("B", "A")
    graph.add_edge("B", "A", EVENT)
    graph.add_edge("A", "A")
    assert graph.edges == [Edge("A", "B", MSG, False), Edge("B", "A", EVENT, True)]


def test_dot_output_is_valid():
    parsed = parse_dot(emit_dot(single_graph()))
    assert parsed["name"] == "IDE"
    assert set(parsed["nodes"]) == {
        "Function",
        "Editor",
        "Compiler",
        "ErrorViewer",
        "ArchitectureControl",
        "ArchitectureShutdown",
    }
    assert all(attrs["shape"] == "ellipse" for attrs in parsed["nodes"].values())
    assert parsed["nodes"]["ArchitectureShutdown"]["style"] == "dotted"
    edges = {(source, target): attrs for source, target, attrs in parsed["edges"]}
    assert edges[("Editor", "Function")] == {"dir": "both"}
    assert edges[("Compiler", "ErrorViewer")] == {}


def test_dot_output_is_byte_stable():
    assert emit_dot(single_graph()) == emit_dot(single_graph())


def test_dot_ignores_insertion_order():
    first, second = CommGraph("G"), CommGraph("G")
    for name in ("B", "A"):
        first.add_node(name)
    for name in ("A", "B"):
        second.add_node(name)
    first.add_edge("A", "B")
    second.add_edge("A", "B")
    assert emit_dot(first) == emit_dot(second)


def test_toolbus_graph(app_flat):
    graph = comm_graph(app_flat)
    names = set(graph.node_names())
    assert {f"P{c}" for c in COMPONENTS} <= names
    assert {f"T{c}" for c in COMPONENTS} <= names
    assert {"ToolBusControl", "ToolBusShutdown"} <= names
    assert Edge("PFunction", "PModuleManager", MSG, True) in graph.edges
    assert Edge("PCompiler", "TCompiler", DO_EVAL, False) in graph.edges
    parsed = parse_dot(emit_dot(graph))
    assert ("PFunction", "TFunction", {"color": "blue", "dir": "both"}) in parsed["edges"]


def test_final_architecture_graph_has_all_components(arch):
    graph = comm_graph(arch)
    assert set(COMPONENTS) <= set(graph.node_names())
