import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psfcoord.data.terms import DataTerm
from psfcoord.errors import (
    ArityMismatch,
    CyclicImport,
    DuplicateDeclaration,
    RenameOfUndeclared,
    SpecSyntaxError,
    UnboundFormal,
    UndeclaredName,
    UnresolvedImport,
)
from psfcoord.lang.lexer import SpecLexer
from psfcoord.lang.parser import parse_process, parse_spec
from psfcoord.lang.prelude import ARCHITECTURE_NODES, TOOLBUS_NODES, load_prelude
from psfcoord.lang.pretty import render_flat, render_spec
from psfcoord.lang.resolve import load_flat, resolve
from psfcoord.semantics.actions import ActionLabel, Conn
from psfcoord.semantics.process import Action, Alt, Call, Par, Seq, Star, render_process

from tests.conftest import APP, ARCH, ARCH_SINGLE


IDE_DATA = """
data module IDEData
begin
  exports
  begin
    functions
      function : -> ID
      editor : -> ID
      compiler : -> ID
      errorviewer : -> ID
      edit-module : -> DATA
      close-module : -> DATA
      module-closed : -> DATA
      module-written : -> DATA
      compile : -> DATA
      errors : -> DATA
      no-errors : -> DATA
  end
  imports
    ArchitectureTypes
end IDEData
"""


def module_text(body: str, name: str = "M", atoms: str = "", imports: str = "ArchitecturePrimitives") -> str:
    return f"""
process module {name}
begin
  exports
  begin
    processes
      {name}
  end
  imports
    {imports}
  atoms
    {atoms or "a"}
  definitions
    {body}
end {name}
"""


def test_lexer_keeps_hyphenated_names():
    tokens = SpecLexer().tokenize("PT-ModuleManager = tb-snd-msg -- comment")
    assert [(t.type, t.value) for t in tokens] == [
        ("IDENT", "PT-ModuleManager"),
        ("EQUALS", "="),
        ("IDENT", "tb-snd-msg"),
    ]


def test_data_module():
    spec = parse_spec(IDE_DATA)
    (module,) = spec.modules
    assert module.kind == "data"
    results = [d.result for d in module.exports]
    assert results.count("ID") == 4
    assert results.count("DATA") == 7


def test_empty_input():
    assert parse_spec("").modules == ()


def test_editor_definition_structure():
    text = module_text(
        "Editor = rec(function >> editor, edit-module) . start-editor . Edit\n    Edit = delta",
        name="Editor",
        atoms="start-editor",
    )
    editor = parse_spec(text).modules[0].definitions[0]
    rec = Action(ActionLabel("rec", Conn(DataTerm("function"), DataTerm("editor"), DataTerm("edit-module"))))
    assert editor.body == Seq(rec, Seq(Action(ActionLabel("start-editor")), Call("Edit")))


def test_local_atoms_become_actions():
    text = module_text("M = a . M", atoms="a")
    body = parse_spec(text).modules[0].definitions[0].body
    assert body == Seq(Action(ActionLabel("a")), Call("M"))


def test_operator_precedence():
    term = parse_process("a . b * c + d || e")
    assert term == Par(Alt(Star(Seq(Call("a"), Call("b")), Call("c")), Call("d")), Call("e"))


def test_tooltb_snd_alias():
    term = parse_process("tooltb-snd(tbterm(parse-ok))")
    assert term.label.name == "tooltb-snd-value"


def test_syntax_error_position():
    with pytest.raises(SpecSyntaxError) as info:
        parse_spec("process module M\nbegin\n  definitions\n    M = a . . b\nend M\n", "bad.psf")
    assert info.value.pos.file == "bad.psf"
    assert info.value.pos.line == 4
    assert str(info.value).startswith("bad.psf:4:")


def test_primitive_arity_is_checked():
    with pytest.raises(SpecSyntaxError):
        parse_process("tb-snd-msg(a, b)")


def test_connection_outside_snd_rec_is_rejected():
    with pytest.raises(SpecSyntaxError):
        parse_process("tb-snd-do(a >> b, c)")


def test_prelude_modules():
    prelude = load_prelude()
    architecture = prelude.module("Architecture")
    assert architecture.parameter_processes() == {"System"}
    exported = architecture.exported_names()
    assert set(ARCHITECTURE_NODES) <= exported
    assert set(TOOLBUS_NODES) <= prelude.module("NewToolBus").exported_names()


def test_resolve_architecture_root():
    flat = load_flat([ARCH_SINGLE])
    assert flat.root == "IDE"
    assert flat.level() == "architecture"
    assert flat.definition("IDE").body == Par(
        Par(Call("IDESystem"), Call("ArchitectureControl")), Call("ArchitectureShutdown")
    )
    assert flat.origins[("Edit", 0)] == "Editor"


def test_resolve_module_without_imports():
    text = "process module M\nbegin\n  atoms\n    a\n  definitions\n    M = a . M\nend M\n"
    flat = resolve(parse_spec(text))
    assert set(flat.defs) == {("M", 0)}
    assert flat.atoms["a"].name == "a"


def test_resolve_tool_instance(app_flat):
    body = app_flat.definition("ModuleManager").body
    assert body == Call("PT-ModuleManager")
    assert app_flat.definition("PT-ModuleManager").body == Par(Call("PModuleManager"), Call("TModuleManager"))
    assert app_flat.root == "IDE"
    assert app_flat.level() == "toolbus"
    assert len(app_flat.tool_instances()) == 8


def test_overloaded_definitions_by_arity(app_flat):
    assert app_flat.definition("TEditorManager", 0) is not None
    assert app_flat.definition("TEditorManager", 1) is not None


def test_unresolved_import():
    with pytest.raises(UnresolvedImport):
        resolve(parse_spec(module_text("M = a", imports="Nowhere")))


def test_unbound_formal():
    text = "process module IDE\nbegin\n  imports\n    Architecture { renamed by [Architecture -> IDE] }\nend IDE\n"
    with pytest.raises(UnboundFormal):
        resolve(parse_spec(text))


def test_rename_of_undeclared():
    text = module_text("M = a") + (
        "process module IDE\nbegin\n  imports\n"
        "    Architecture { System bound by [System -> M] to M renamed by [Nothing -> IDE] }\nend IDE\n"
    )
    with pytest.raises(RenameOfUndeclared):
        resolve(parse_spec(text))


def test_cyclic_import():
    text = module_text("A = a", name="A", imports="B") + module_text("B = a", name="B", imports="A")
    with pytest.raises(CyclicImport):
        resolve(parse_spec(text))


def test_duplicate_process():
    text = module_text("M = a\n    M = a . a")
    with pytest.raises(DuplicateDeclaration):
        resolve(parse_spec(text))


def test_undeclared_name():
    with pytest.raises(UndeclaredName):
        resolve(parse_spec(module_text("M = b")))


def test_call_with_wrong_arity():
    with pytest.raises(ArityMismatch):
        resolve(parse_spec(module_text("M = a . M(x)")))


def test_pretty_printed_corpus_parses_back():
    spec = parse_spec(ARCH.read_text(encoding="utf-8"))
    assert parse_spec(render_spec(spec)) == spec
    app = parse_spec(APP.read_text(encoding="utf-8"))
    assert parse_spec(render_spec(app)) == app


def test_render_flat_parses_back(refined):
    text = render_flat(refined, "PIDE")
    spec = parse_spec(text)
    assert [m.name for m in spec.modules] == ["PIDEData", "PIDE"]
    reparsed = {d.key: render_process(d.body) for d in spec.modules[1].definitions}
    assert reparsed == {key: render_process(d.body) for key, d in refined.defs.items()}


names = st.sampled_from(["a", "b", "start-editor", "Edit", "PModuleManager"])
snd_actions = st.builds(
    lambda src, dst, term: Action(ActionLabel("snd", Conn(DataTerm(src), DataTerm(dst), DataTerm(term)))),
    st.sampled_from(["function", "editor"]),
    st.sampled_from(["editor", "compiler"]),
    st.sampled_from(["edit-module", "errors"]),
)
leaves = st.builds(Call, names) | snd_actions
process_terms = st.recursive(
    leaves,
    lambda inner: st.one_of(
        st.builds(Seq, inner, inner),
        st.builds(Alt, inner, inner),
        st.builds(Par, inner, inner),
        st.builds(Star, inner, inner),
    ),
    max_leaves=8,
)


@settings(max_examples=200)
@given(process_terms)
def test_render_process_is_a_parse_fixed_point(term):
    text = render_process(term)
    parsed = parse_process(text)
    assert render_process(parsed) == text
    assert parse_process(render_process(parsed)) == parsed
