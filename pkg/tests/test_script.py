import pytest

from psfcoord.emit.script import (
    extract_model,
    extract_script,
    render_process_script,
    script_of,
    stub_script,
)
from psfcoord.errors import NonTailRecursion
from psfcoord.lang.parser import parse_spec
from psfcoord.semantics.process import Call
from psfcoord.semantics.sos import Semantics
from psfcoord.semantics.star_law import traces
from psfcoord.toolbus.application import assemble

from tests.helpers.script_interp import script_traces


TOOLS = """
process module Tools
begin
  atoms
    simulator-start
    simulator-stop
  definitions
    TEditorManager =
      TEditorManager(nat(^0))
    TEditorManager(n : NAT) =
      tooltb-rec(tbterm(start-editor)) . TEditorManager(succ(n))
      + [gt(n, nat(^0)) = true] ->
        ( tooltb-snd-event(tbterm(editor-close)) . tooltb-rec-ack-event(tbterm(editor-close))
          . TEditorManager(pred(n))
        + tooltb-snd-event(tbterm(editor-write)) . tooltb-rec-ack-event(tbterm(editor-write))
          . TEditorManager(n) )
      + tooltb-rec(tbterm(close-editor)) . TEditorManager(pred(n))
    TLoop =
      ( tooltb-rec(tbterm(compile)) + simulator-start ) * simulator-stop
    TBad =
      TBad . simulator-start
    TOnce =
      tooltb-snd-event(tbterm(quit)) . tooltb-rec-ack-event(tbterm(quit))
end Tools
"""


@pytest.fixture(scope="module")
def definitions():
    module = parse_spec(TOOLS).modules[0]
    return {d.key: d for d in module.definitions}


def test_counter_becomes_variable(definitions):
    text = render_process_script(script_of(definitions, "TEditorManager"))
    assert text.splitlines() == [
        "process TEditorManager is",
        "  var n := 0",
        "  repeat",
        "      rec(start-editor) . n := n + 1",
        "    + [n > 0] -> snd-event(editor-close) . rec-ack-event(editor-close) . n := n - 1",
        "    + [n > 0] -> snd-event(editor-write) . rec-ack-event(editor-write)",
        "    + rec(close-editor) . n := n - 1",
        "  endrepeat",
        "end TEditorManager",
    ]


def test_iteration_with_exit(definitions):
    text = render_process_script(script_of(definitions, "TLoop"))
    assert text.splitlines() == [
        "process TLoop is",
        "  repeat",
        "      rec(compile)",
        "    + simulator-start",
        "  until",
        "      simulator-stop",
        "end TLoop",
    ]


def test_process_without_recursion(definitions):
    script = script_of(definitions, "TOnce")
    assert not script.loops
    assert "snd-event(quit) . rec-ack-event(quit)" in render_process_script(script)


def test_non_tail_recursion(definitions):
    with pytest.raises(NonTailRecursion) as info:
        script_of(definitions, "TBad")
    stub = render_process_script(stub_script("TBad", info.value))
    assert stub.startswith("-- process TBad: not extracted\n")
    assert "not tail-recursive" in stub


def test_extract_ide_script(app_flat):
    app = assemble(app_flat)
    model = extract_model(app)
    names = [p.name for p in model.processes]
    assert "TSimulator" in names
    assert "PModuleManager" in names
    assert len(names) == len(set(names))
    simulator = render_process_script(model.process("TSimulator"))
    assert "  var simulating := false\n" in simulator
    assert "    + [simulating == false] -> simulator-start . simulating := true\n" in simulator
    assert "    + [simulating == true] -> simulator-quit . simulating := false\n" in simulator
    text = extract_script(app)
    assert text.startswith("-- ToolBus script extracted from IDE\n")
    assert "snd-msg(function, module-manager, quit, module: <var>)" in text


@pytest.mark.parametrize("name", ["TEditorManager", "TLoop", "TOnce"])
def test_script_has_the_traces_of_its_process(definitions, name):
    semantics = Semantics(definitions)
    script = script_of(definitions, name)
    assert script_traces(script, 6, semantics) == traces(Call(name), 6, semantics)


def test_all_ide_tools_are_extracted_faithfully(app_flat):
    app = assemble(app_flat)
    semantics = Semantics(app.flat.defs)
    for component in app.components:
        script = script_of(app.flat.defs, component.tool.name)
        assert script.stub is None
        assert script_traces(script, 6, semantics) == traces(Call(component.tool.name), 6, semantics), component.name
