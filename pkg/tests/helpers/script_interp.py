"""Интерпретатор извлеченных скриптов для сравнения трасс с исходным процессом (только для тестов)."""

from __future__ import annotations

from psfcoord.data.terms import GuardExpr, eval_guard, evaluate, substitute_term
from psfcoord.emit.script import Alternative, ProcessScript
from psfcoord.semantics.process import Skip, substitute_process
from psfcoord.semantics.sos import Semantics


def _holds(guard: GuardExpr, env: dict) -> bool:
    return eval_guard(GuardExpr(substitute_term(guard.lhs, env), substitute_term(guard.rhs, env)))


def _after(alternative: Alternative, env: dict) -> dict:
    updated = dict(env)
    for name, value in alternative.updates:
        updated[name] = evaluate(substitute_term(value, env))
    return updated


def script_traces(script: ProcessScript, depth: int, semantics: Semantics) -> set[tuple[str, ...]]:
    """Трассы скрипта длины не больше ``depth``; пустые тела альтернатив - невидимые шаги."""
    out: set[tuple[str, ...]] = {()}
    seen: set = set()

    def loop(env: dict, trace: tuple[str, ...]) -> None:
        key = ("loop", tuple(sorted(env.items(), key=lambda item: item[0])), trace)
        if key in seen:
            return
        seen.add(key)
        for alternative in script.alternatives:
            if not all(_holds(g, env) for g in alternative.guards):
                continue
            if alternative.body is None:
                finish(alternative, env, trace)
            else:
                body(alternative, env, substitute_process(alternative.body, env), trace)

    def finish(alternative: Alternative, env: dict, trace: tuple[str, ...]) -> None:
        if alternative.continues:
            loop(_after(alternative, env), trace)

    def body(alternative: Alternative, env: dict, term, trace: tuple[str, ...]) -> None:
        if len(trace) >= depth:
            return
        for label, target in semantics.steps(term):
            extended = (*trace, label.render())
            out.add(extended)
            if isinstance(target, Skip):
                finish(alternative, env, extended)
            else:
                body(alternative, env, target, extended)

    loop(dict(script.variables), ())
    return out
