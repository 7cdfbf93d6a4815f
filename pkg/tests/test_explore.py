import io
import json

import pytest

from psfcoord.errors import InvalidChoice
from psfcoord.explore.interactive import InteractiveStepper, step_interactive
from psfcoord.explore.lts import ExploreBounds, can_reach, deadlocks, explore, shutdown_states, unexpanded
from psfcoord.explore.simulate import (
    BOUND_REACHED,
    DEADLOCKED,
    TERMINATED,
    FirstEnabled,
    Scripted,
    SeededRandom,
    make_policy,
    replay,
    replays,
    simulate,
)
from psfcoord.explore.trace_io import format_trace, format_trace_jsonl
from psfcoord.lang.resolve import load_flat
from psfcoord.semantics.actions import ActionLabel
from psfcoord.semantics.process import DELTA, Action, Seq
from psfcoord.semantics.sos import Semantics, root_configuration

from tests.conftest import ARCH, ARCH_MULTI, ARCH_NOEVENTS, ARCH_SINGLE


def bare(term):
    return Semantics({}).configuration(term)


@pytest.fixture(scope="module")
def single():
    return root_configuration(load_flat([ARCH_SINGLE]))


def test_delta_is_a_single_deadlock_state():
    lts = explore(bare(DELTA))
    assert len(lts.states) == 1
    assert lts.frontier_exhausted
    assert deadlocks(lts) == [0]


def test_terminated_sequence_is_not_a_deadlock():
    lts = explore(bare(Seq(Action(ActionLabel("a")), Action(ActionLabel("b")))))
    assert len(lts.states) == 3
    assert deadlocks(lts) == []


def test_single_architecture_has_deadlocks(single):
    lts = explore(single)
    assert lts.frontier_exhausted
    assert deadlocks(lts)


def test_multi_architecture_is_deadlock_free():
    lts = explore(root_configuration(load_flat([ARCH_MULTI])))
    assert lts.frontier_exhausted
    assert deadlocks(lts) == []


def test_removing_event_handling_introduces_deadlock():
    lts = explore(root_configuration(load_flat([ARCH_NOEVENTS])))
    assert lts.frontier_exhausted
    assert len(deadlocks(lts)) >= 1


def test_final_architecture_is_deadlock_free_and_can_shut_down():
    lts = explore(root_configuration(load_flat([ARCH])))
    assert lts.frontier_exhausted
    assert deadlocks(lts) == []
    halted = shutdown_states(lts)
    assert halted
    assert can_reach(lts, halted) == set(range(len(lts.states)))


def shape(lts):
    return (
        [state.render() for state in lts.states],
        [(source, label.render(), target) for source, label, target in lts.transitions],
    )


@pytest.mark.parametrize("workers", [2, 4])
def test_exploration_is_deterministic(single, workers):
    sequential = shape(explore(single))
    assert shape(explore(single)) == sequential
    assert shape(explore(single, workers=workers)) == sequential


def test_larger_bound_extends_smaller_exploration(single):
    runs = [explore(single, ExploreBounds(max_states=n)) for n in (5, 20)] + [explore(single)]
    for smaller, larger in zip(runs, runs[1:]):
        states, transitions = shape(smaller)
        bigger_states, bigger_transitions = shape(larger)
        assert len(states) <= len(bigger_states)
        assert bigger_states[: len(states)] == states
        assert bigger_transitions[: len(transitions)] == transitions
        assert smaller.expanded <= larger.expanded


def test_state_bound_reports_incomplete_exploration(single):
    lts = explore(single, ExploreBounds(max_states=5))
    assert len(lts.states) == 5
    assert not lts.frontier_exhausted
    assert unexpanded(lts)


def test_bounds_must_be_positive():
    with pytest.raises(ValueError):
        ExploreBounds(max_depth=0)


def test_simulate_delta():
    trace = simulate(bare(DELTA), FirstEnabled(), 10)
    assert trace.labels == []
    assert trace.status == DEADLOCKED


def test_simulate_terminates():
    trace = simulate(bare(Action(ActionLabel("a"))), FirstEnabled(), 10)
    assert trace.rendered() == ["a"]
    assert trace.status == TERMINATED
    assert len(trace.states) == 2


def test_first_enabled_on_single_architecture(single):
    trace = simulate(single, FirstEnabled(), 2)
    assert trace.rendered() == ["edit-module", "comm-snd-rec(function >> editor, edit-module)"]
    assert trace.status == BOUND_REACHED


def test_seeded_random_is_reproducible(single):
    first = simulate(single, SeededRandom(7), 40)
    second = simulate(single, SeededRandom(7), 40)
    assert first.labels == second.labels
    assert first.states == second.states
    assert replays(single, first)


def test_scripted_policy(single):
    trace = simulate(single, Scripted(["compile", "comm-snd-rec"]), 100)
    assert trace.rendered() == ["compile", "comm-snd-rec(function >> compiler, compile)"]
    assert trace.status == BOUND_REACHED


def test_scripted_policy_rejects_disabled_action(single):
    with pytest.raises(InvalidChoice):
        simulate(single, Scripted(["editor-write"]), 10)


def test_make_policy():
    assert isinstance(make_policy("seeded-random", seed=3), SeededRandom)
    assert isinstance(make_policy("scripted", script=["a"]), Scripted)
    with pytest.raises(ValueError):
        make_policy("greedy")


def test_replay_rejects_foreign_label(single):
    visited = replay(single, [ActionLabel("edit-module")])
    assert len(visited) == 2
    with pytest.raises(InvalidChoice):
        replay(single, [ActionLabel("editor-close")])


def test_step_interactive(single):
    transitions, apply = step_interactive(single)
    names = [t.label.name for t in transitions]
    assert "edit-module" in names
    assert apply(str(names.index("compile"))).enabled()
    with pytest.raises(InvalidChoice):
        apply("99")


def test_interactive_session(single):
    stdin = io.StringIO("0\nx\n0\nq\n")
    stdout = io.StringIO()
    stepper = InteractiveStepper(single, stdin, stdout)
    stepper.run()
    assert [t.label.name for t in stepper.history] == ["edit-module", "comm-snd-rec"]
    assert "[0] edit-module" in stdout.getvalue()
    assert "invalid choice" in stdout.getvalue().lower()


def test_interactive_session_reports_deadlock():
    stdout = io.StringIO()
    InteractiveStepper(bare(DELTA), io.StringIO(""), stdout).run()
    assert stdout.getvalue() == "deadlock\n"


def test_trace_formats(single):
    trace = simulate(single, FirstEnabled(), 2)
    text = format_trace(trace)
    assert text.splitlines() == [
        "0\tedit-module\t",
        "1\tcomm-snd-rec\tfunction >> editor, edit-module",
        "#status bound-reached",
    ]
    records = [json.loads(line) for line in format_trace_jsonl(trace).splitlines()]
    assert records[0]["action"] == "edit-module"
    assert records[1]["payload"] == "function >> editor, edit-module"
    assert records[1]["state"] == trace.states[2]
    assert records[-1] == {"status": "bound-reached"}
