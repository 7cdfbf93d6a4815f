import pytest

from psfcoord.data.terms import DataTerm
from psfcoord.errors import MissingBinding, MixedVocabulary
from psfcoord.explore.simulate import FirstEnabled, Scripted, SeededRandom, simulate
from psfcoord.lang.ast import ProcessDef
from psfcoord.lang.parser import parse_process
from psfcoord.lang.resolve import FlatSpec
from psfcoord.semantics.actions import TOOLBUS_BLOCKED, ActionLabel, ToolSide, is_tool_primitive
from psfcoord.semantics.process import DELTA, Call, Par, iter_actions
from psfcoord.semantics.sos import Semantics
from psfcoord.toolbus.application import assemble, run_application, stub_application
from psfcoord.toolbus.constrain import check_bus_vocabulary, constrain, tool_stub

from tests.conftest import COMPONENTS


QUIT_SCRIPT = [
    "comm-event(MODULEMANAGER, tbterm(quit))",
    "comm-ack-event(MODULEMANAGER, tbterm(quit))",
    "comm-msg(function, module-manager, tbterm(quit))",
    "comm-tb-shutdown",
    "system-terminated",
]


def definition(name, text):
    return ProcessDef(name, (), parse_process(text))


@pytest.fixture()
def editor_pair():
    bus = definition("PEditor", "tb-snd-do(EDITOR, tbterm(start-editor)) . PEditor")
    tool = definition("TEditor", "tooltb-rec(tbterm(start-editor)) . TEditor")
    return bus, tool


@pytest.fixture(scope="module")
def app(app_flat):
    return assemble(app_flat)


def test_constrain_tags_both_sides(editor_pair):
    constrained = constrain(*editor_pair)
    assert constrained.name == "PT-Editor"
    assert constrained.tool_id == DataTerm("EDITOR")
    (bus_label,) = [label for label in iter_actions(constrained.bus.body)]
    (tool_label,) = [label for label in iter_actions(constrained.tool.body)]
    assert bus_label.owner == tool_label.owner == "Editor"
    assert tool_label.payload == ToolSide(DataTerm("EDITOR"), DataTerm("tbterm", (DataTerm("start-editor"),)))
    assert constrained.definition().body == Par(Call("PEditor"), Call("TEditor"))


def test_constrained_pair_communicates(editor_pair):
    constrained = constrain(*editor_pair)
    semantics = Semantics({d.key: d for d in constrained.definitions()})
    config = semantics.configuration(Call("PT-Editor"), TOOLBUS_BLOCKED)
    (transition,) = config.enabled()
    assert transition.label.render() == "comm-do(EDITOR, tbterm(start-editor))"


def test_different_owners_do_not_communicate(editor_pair):
    bus, tool = editor_pair
    left = constrain(bus, tool)
    right = constrain(definition("POther", "tb-snd-do(EDITOR, tbterm(start-editor)) . POther"), tool)
    defs = {d.key: d for d in (left.bus, right.tool)}
    defs[("POther", 0)] = right.bus
    config = Semantics(defs).configuration(Par(Call("PEditor"), Call("TEditor")), TOOLBUS_BLOCKED)
    assert config.enabled() == []


def test_mixed_vocabulary(editor_pair):
    _, tool = editor_pair
    with pytest.raises(MixedVocabulary):
        constrain(definition("PEditor", "tooltb-rec(tbterm(start-editor))"), tool)
    with pytest.raises(MixedVocabulary):
        check_bus_vocabulary(definition("PEditor", "snd(editor >> function, module-closed)"))


def test_explicit_tool_id(editor_pair):
    assert constrain(*editor_pair, tool_id="EDITOR2").tool_id == DataTerm("EDITOR2")


def test_tool_stub():
    bus = definition("PEditor", "tb-snd-do(EDITOR, tbterm(a)) . tb-rec-event(EDITOR, tbterm(b)) . PEditor")
    stub = tool_stub([bus])
    assert stub.name == "TEditor"
    names = sorted(label.name for label in iter_actions(stub.body))
    assert names == ["tooltb-rec", "tooltb-snd-event"]


def test_tool_stub_without_tool_actions():
    assert tool_stub([definition("PQuiet", "tb-snd-msg(a, b, c)")]).body == DELTA


def test_assemble_ide(app):
    assert [c.component for c in app.components] == list(COMPONENTS)
    assert app.root == "IDE"
    assert app.component("Compiler").tool_id == DataTerm("COMPILER")
    assert app.component("PT-Function").tool_id == DataTerm("MODULEMANAGER")


def test_assembled_sides_keep_their_vocabulary(app):
    for component in app.components:
        check_bus_vocabulary(component.bus)
        for label in iter_actions(component.tool.body):
            if is_tool_primitive(label.name):
                assert label.owner == component.component


def test_missing_tool_side():
    flat = FlatSpec(
        defs={
            ("PT-Editor", 0): ProcessDef("PT-Editor", (), Par(Call("PEditor"), Call("PEditor"))),
            ("PEditor", 0): ProcessDef("PEditor", (), DELTA),
        }
    )
    with pytest.raises(MissingBinding):
        assemble(flat)


def test_scripted_quit(app):
    trace = run_application(app, Scripted(QUIT_SCRIPT), max_steps=20)
    assert trace.rendered() == QUIT_SCRIPT
    assert trace.status == "terminated"


def test_seeded_runs_are_reproducible(app):
    first = run_application(app, SeededRandom(11), max_steps=60)
    second = run_application(app, SeededRandom(11), max_steps=60)
    assert first.labels == second.labels


def test_bus_primitives_never_fire_alone(app):
    trace = run_application(app, SeededRandom(3), max_steps=80)
    assert not {label.name for label in trace.labels} & TOOLBUS_BLOCKED


def test_bus_primitives_stay_encapsulated_over_many_seeds(app):
    root = app.configuration()
    fired = set()
    for seed in range(1000):
        trace = simulate(root, SeededRandom(seed), 25)
        fired.update(label.name for label in trace.labels)
    assert fired
    assert not fired & TOOLBUS_BLOCKED


def test_stub_application(refined):
    stubbed = stub_application(refined)
    assert sorted(stubbed.tool_names()) == sorted(f"T{c}" for c in COMPONENTS)
    assert stubbed.root == "ToolBus"
    trace = run_application(stubbed, FirstEnabled(), max_steps=30)
    assert trace.labels
    assert all(isinstance(label, ActionLabel) for label in trace.labels)
