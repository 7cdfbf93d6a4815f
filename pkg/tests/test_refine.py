import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psfcoord.data.terms import DataTerm
from psfcoord.errors import DuplicatePattern, PlaceholderNotBound, SpecSyntaxError, UnmappedAction
from psfcoord.lang.ast import ProcessDef
from psfcoord.lang.parser import parse_process
from psfcoord.refine.mapping import load_mapping
from psfcoord.refine.refine import NAMING, audit_report, component_modules, refine_process, refine_system
from psfcoord.semantics.actions import ActionLabel, Conn
from psfcoord.semantics.process import (
    Action,
    Alt,
    Call,
    Seq,
    Star,
    iter_actions,
    iter_calls,
    render_process,
    skeleton,
)

from tests.conftest import COMPONENTS


def rec(source, target, term):
    return Action(ActionLabel("rec", Conn(DataTerm(source), DataTerm(target), DataTerm(term))))


def test_empty_mapping_has_builtin_defaults():
    table = load_mapping("")
    assert table.components == {}
    assert [r.pattern.name for r in table.defaults] == ["snd", "rec"]


def test_explicit_default_section_replaces_builtin_rules():
    table = load_mapping("default\n  snd($1 >> $2, $3) -> tb-snd-msg($1, $2, $3) ;\n")
    assert len(table.defaults) == 1


def test_ide_mapping(table):
    assert set(table.components) == set(COMPONENTS)
    assert len(table.defaults) == 2
    (quit,) = table.components["Function"]
    assert quit.render() == (
        "push-quit -> tb-rec-event(MODULEMANAGER, tbterm(quit)) . tb-snd-ack-event(MODULEMANAGER, tbterm(quit)) ;"
    )


def test_duplicate_pattern():
    with pytest.raises(DuplicatePattern):
        load_mapping("component Editor\n  a -> b ;\n  a -> c ;\n")


def test_more_specific_pattern_is_not_a_duplicate():
    table = load_mapping(
        "component Compiler\n"
        "  rec($1 >> $2, $3) -> tb-rec-msg($1, $2, $3) ;\n"
        "  rec(a >> b, $1) -> tb-rec-msg(a, b, $1) . tb-snd-do(COMPILER, $1) ;\n"
    )
    rule, bindings = table.lookup("Compiler", rec("a", "b", "compile").label)
    assert len(rule.replacement) == 2
    assert bindings == {1: DataTerm("compile")}


def test_placeholder_not_bound():
    with pytest.raises(PlaceholderNotBound):
        load_mapping("default\n  snd($1 >> $2, $3) -> tb-snd-msg($1, $2, $4) ;\n")


def test_mapping_syntax_error():
    with pytest.raises(SpecSyntaxError):
        load_mapping("component Editor\n  a -> ;\n")


def test_refine_process_with_defaults():
    table = load_mapping("")
    editor = ProcessDef("Editor", (), Seq(rec("function", "editor", "edit-module"), Call("Editor")))
    refined = refine_process(editor, table, "Editor")
    assert render_process(refined.body) == "tb-rec-msg(function, editor, tbterm(edit-module)) . Editor"


def test_refine_process_expands_to_sequence(table):
    function = ProcessDef("Function", (), Star(Call("Work"), Action(ActionLabel("push-quit"))))
    audit = []
    refined = refine_process(function, table, "Function", audit)
    assert refined.body == Star(
        Call("Work"),
        Seq(
            parse_process("tb-rec-event(MODULEMANAGER, tbterm(quit))"),
            parse_process("tb-snd-ack-event(MODULEMANAGER, tbterm(quit))"),
        ),
    )
    assert len(audit) == 1
    assert audit[0].component == "Function"


def test_refine_process_reports_unmapped_action():
    table = load_mapping("")
    body = Alt(Action(ActionLabel("start-editor")), Action(ActionLabel("editor-close")))
    with pytest.raises(UnmappedAction) as info:
        refine_process(ProcessDef("Editor", (), body), table, "Editor")
    assert len(info.value.occurrences) == 2


def test_component_modules(arch):
    components = component_modules(arch)
    assert set(components) == set(COMPONENTS)
    assert ("IDESystem", 0) not in [key for keys in components.values() for key in keys]


def test_refine_system_names(refined):
    names = refined.process_names()
    assert {NAMING.bus_name(c) for c in COMPONENTS} <= names
    assert "IDESystem" not in names
    assert "IDE" not in names
    assert refined.root is None
    assert refined.origins[("PModuleManager", 0)] == "PModuleManager"


def test_refined_system_uses_only_bus_vocabulary(refined):
    names = {label.name for d in refined.defs.values() for label in iter_actions(d.body)}
    assert "snd" not in names
    assert "rec" not in names
    assert "snd-tb-shutdown" in names
    assert "tb-rec-event" in names


def test_calls_are_renamed(refined):
    calls = {call.name for call in iter_calls(refined.definition("PModuleManager").body)}
    assert "PEventsEditorManager" in calls
    assert "EventsEditorManager" not in calls


def test_refining_twice_fails(refined, table):
    with pytest.raises(UnmappedAction):
        refine_system(refined, table)


def test_audit(refined_with_audit):
    _, audit = refined_with_audit
    components = {item.component for item in audit}
    assert components == set(COMPONENTS)
    report = audit_report(audit)
    assert len(report.splitlines()) == len(audit)
    assert "Function\tpush-quit\ttb-rec-event(MODULEMANAGER, tbterm(quit)) . " in report
    assert len(audit) == len(set(audit))


renaming_table = load_mapping("component C\n  a -> x ;\n  b -> y ;\n")
leaves = st.sampled_from([Action(ActionLabel("a")), Action(ActionLabel("b")), Call("C")])
bodies = st.recursive(
    leaves,
    lambda inner: st.one_of(st.builds(Seq, inner, inner), st.builds(Alt, inner, inner), st.builds(Star, inner, inner)),
    max_leaves=10,
)


@settings(max_examples=150)
@given(bodies)
def test_refinement_preserves_structure(body):
    refined = refine_process(ProcessDef("C", (), body), renaming_table, "C")
    assert skeleton(refined.body) == skeleton(body)
    assert {label.name for label in iter_actions(refined.body)} <= {"x", "y"}
