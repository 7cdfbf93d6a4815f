import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psfcoord.data.terms import DataTerm, GuardExpr
from psfcoord.errors import ArityMismatch, ExplorationBoundExceeded, RecursionFuseBlown, UndefinedProcess
from psfcoord.lang.ast import Formal, ProcessDef
from psfcoord.lang.parser import bind_formals, parse_process
from psfcoord.semantics.actions import (
    ARCH_BLOCKED,
    ActionLabel,
    Conn,
    TermPayload,
    ToolSide,
    communicate,
)
from psfcoord.semantics.process import DELTA, SKIP, Action, Alt, Call, Guard, Par, Seq, Star
from psfcoord.semantics.sos import Semantics, is_final
from psfcoord.semantics.star_law import traces, unfold_star_law_check


def act(name):
    return Action(ActionLabel(name))


def labels(term, semantics=None):
    semantics = semantics or Semantics({})
    return sorted(label.render() for label, _ in semantics.steps(term))


def test_action_steps_to_termination():
    steps = Semantics({}).steps(act("a"))
    assert steps == ((ActionLabel("a"), SKIP),)


def test_seq_advances_after_left_terminates():
    semantics = Semantics({})
    ((label, target),) = semantics.steps(Seq(act("a"), act("b")))
    assert label.name == "a"
    assert labels(target, semantics) == ["b"]


def test_alt_is_union():
    assert labels(Alt(act("a"), act("b"))) == ["a", "b"]


def test_delta_has_no_steps():
    assert labels(DELTA) == []
    assert labels(Alt(DELTA, act("a"))) == ["a"]


def test_par_interleaves_and_communicates():
    term = parse_process("snd(function >> editor, edit-module) || rec(function >> editor, edit-module)")
    assert labels(term) == [
        "comm-snd-rec(function >> editor, edit-module)",
        "rec(function >> editor, edit-module)",
        "snd(function >> editor, edit-module)",
    ]


def test_mismatched_payloads_do_not_communicate():
    term = parse_process("snd(function >> editor, edit-module) || rec(function >> editor, close-module)")
    assert not any(name.startswith("comm-") for name in labels(term))


def test_encapsulation_removes_unmatched_primitives():
    semantics = Semantics({})
    term = parse_process("snd(a >> b, x) || rec(a >> b, x) || snd(a >> b, y)")
    config = semantics.configuration(term, ARCH_BLOCKED)
    assert [t.label.render() for t in config.enabled()] == ["comm-snd-rec(a >> b, x)"]


def test_star_repeats_body_and_exits():
    semantics = Semantics({})
    star = Star(act("a"), act("b"))
    steps = dict((label.name, target) for label, target in semantics.steps(star))
    assert steps["a"] == star
    assert steps["b"] == SKIP


def test_guard_follows_condition():
    true_guard = Guard(GuardExpr(DataTerm("true"), DataTerm("true")), act("a"))
    false_guard = Guard(GuardExpr(DataTerm("false"), DataTerm("true")), act("a"))
    assert labels(true_guard) == ["a"]
    assert labels(false_guard) == []


def test_call_unfolds_with_arguments():
    body = parse_process("tooltb-rec(tbterm(start-editor)) . Counter(succ(n))")
    definition = ProcessDef("Counter", (Formal("n", "NAT"),), bind_formals(body, {"n"}))
    semantics = Semantics({definition.key: definition})
    ((label, target),) = semantics.steps(Call("Counter", (DataTerm("^0"),)))
    assert label.render() == "tooltb-rec(tbterm(start-editor))"
    assert target == Call("Counter", (DataTerm("succ", (DataTerm("^0"),)),))


def test_undefined_process():
    with pytest.raises(UndefinedProcess):
        Semantics({}).steps(Call("Nowhere"))


def test_arity_mismatch():
    definition = ProcessDef("P", (), act("a"))
    with pytest.raises(ArityMismatch):
        Semantics({definition.key: definition}).steps(Call("P", (DataTerm("x"),)))


def test_unguarded_recursion_blows_the_fuse():
    definition = ProcessDef("Loop", (), Alt(Call("Loop"), act("a")))
    with pytest.raises(RecursionFuseBlown):
        Semantics({definition.key: definition}).steps(Call("Loop"))


def test_system_terminated_halts():
    semantics = Semantics({})
    config = semantics.configuration(Par(Seq(act("system-terminated"), act("a")), act("b")))
    halted = next(t.target for t in config.enabled() if t.label.name == "system-terminated")
    assert is_final(halted)
    assert halted.enabled() == []


def test_tool_pairs_need_equal_tool_and_owner():
    bus = ActionLabel("tb-snd-do", ToolSide(DataTerm("EDITOR"), DataTerm("x")), owner="Editor")
    tool = ActionLabel("tooltb-rec", ToolSide(DataTerm("EDITOR"), DataTerm("x")), owner="Editor")
    stranger = ActionLabel("tooltb-rec", ToolSide(DataTerm("EDITOR"), DataTerm("x")), owner="Compiler")
    untagged = ActionLabel("tooltb-rec", TermPayload(DataTerm("x")))
    assert communicate(bus, tool).name == "comm-do"
    assert communicate(tool, bus).name == "comm-do"
    assert communicate(bus, stranger) is None
    assert communicate(bus, untagged) is None


def test_exact_pairs_compare_evaluated_payloads():
    snd = ActionLabel("snd", Conn(DataTerm("a"), DataTerm("b"), DataTerm("nat", (DataTerm("^0"),))))
    rec = ActionLabel("rec", Conn(DataTerm("a"), DataTerm("b"), DataTerm("^0")))
    assert communicate(snd, rec).render() == "comm-snd-rec(a >> b, ^0)"


# --- свойства ------------------------------------------------------------------------

atoms = st.sampled_from([act(n) for n in ("a", "b", "c", "d")])

processes = st.recursive(
    atoms | st.just(DELTA),
    lambda inner: st.one_of(
        st.builds(Seq, inner, inner),
        st.builds(Alt, inner, inner),
        st.builds(Par, inner, inner),
        st.builds(Star, inner, inner),
    ),
    max_leaves=6,
)


@settings(max_examples=200, deadline=None)
@given(processes, processes)
def test_star_unfolding_law(x, y):
    assert unfold_star_law_check(x, y, 6)


@settings(deadline=None)
@given(processes, processes)
def test_alt_and_par_are_commutative(x, y):
    assert traces(Alt(x, y), 4) == traces(Alt(y, x), 4)
    assert traces(Par(x, y), 4) == traces(Par(y, x), 4)


@settings(deadline=None)
@given(processes)
def test_true_guard_is_transparent(x):
    guard = Guard(GuardExpr(DataTerm("true"), DataTerm("true")), x)
    assert traces(guard, 4) == traces(x, 4)


def test_star_law_depth_is_bounded():
    with pytest.raises(ExplorationBoundExceeded):
        unfold_star_law_check(act("a"), act("b"), 13)


def test_step_memo_is_bounded():
    term = act("a")
    for name in "bcdefgh":
        term = Seq(term, Par(act(name), act("z")))
    small = Semantics({}, memo_size=4)
    assert traces(term, 10, small) == traces(term, 10)
    assert small.memo_len() <= 4
    small.clear_memo()
    assert small.memo_len() == 0


def test_memo_size_must_be_positive():
    with pytest.raises(ValueError):
        Semantics({}, memo_size=0)
