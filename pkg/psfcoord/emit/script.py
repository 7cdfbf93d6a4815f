"""Извлечение ToolBus-скриптов из хвостово-рекурсивных процессов.

Рекурсия с параметрами хранит состояние: параметры становятся переменными
скрипта, аргументы хвостовых вызовов - присваиваниями, а сам процесс - циклом
``repeat`` из охраняемых альтернатив. Процесс, не прошедший проверку хвостовой
рекурсии, выводится закомментированной заглушкой.

Формат ``.tbs``::

    process TSimulator is
      var simulating := false
      repeat
          rec(new-tilspecification)
        + [simulating == false] -> simulator-start . simulating := true
      endrepeat
    end TSimulator

Данные сообщений не несут модуля, к которому они относятся; в ``snd-msg``/``rec-msg``
оставлено место ``module: <var>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from psfcoord.data.terms import FALSE, TRUE, DataTerm, GuardExpr, Term, Var, evaluate, to_int
from psfcoord.errors import NonTailRecursion
from psfcoord.lang.ast import ProcessDef
from psfcoord.semantics.actions import ActionLabel, Msg, TermPayload, ToolSide
from psfcoord.semantics.process import (
    Action,
    Alt,
    Call,
    Delta,
    Guard,
    Par,
    Process,
    Seq,
    Skip,
    Star,
    flatten,
    iter_calls,
    render_process,
)
from psfcoord.utils.log_config import get_logger

if TYPE_CHECKING:
    from psfcoord.toolbus.application import ToolBusApplication


logger = get_logger(__name__)

MODULE_SLOT = "module: <var>"

SCRIPT_PRIMITIVES = {
    "tb-snd-msg": "snd-msg",
    "tb-rec-msg": "rec-msg",
    "tb-rec-event": "rec-event",
    "tb-snd-ack-event": "snd-ack-event",
    "tb-snd-do": "snd-do",
    "tb-snd-eval": "snd-eval",
    "tb-rec-value": "rec-value",
    "snd-tb-shutdown": "shutdown",
    "tooltb-snd-event": "snd-event",
    "tooltb-rec-ack-event": "rec-ack-event",
    "tooltb-rec": "rec",
    "tooltb-snd-value": "snd-value",
}


@dataclass(frozen=True)
class Alternative:
    """Охраняемая альтернатива цикла.

    Attributes:
        guards: Охраны, проверяемые в начале итерации.
        body: Тело альтернативы без хвостового вызова (``None`` - пустое).
        updates: Присваивания переменным из аргументов хвостового вызова.
        continues: После тела - следующая итерация; иначе процесс завершается.
    """

    guards: tuple[GuardExpr, ...] = ()
    body: Process | None = None
    updates: tuple[tuple[str, Term], ...] = ()
    continues: bool = True


@dataclass(frozen=True)
class ProcessScript:
    name: str
    variables: tuple[tuple[str, Term], ...] = ()
    alternatives: tuple[Alternative, ...] = ()
    stub: str | None = None

    @property
    def loops(self) -> bool:
        return any(a.continues for a in self.alternatives)


@dataclass
class ScriptModel:
    """Скрипты процессов приложения в порядке компонент."""

    name: str = "ToolBus"
    processes: list[ProcessScript] = field(default_factory=list)

    def process(self, name: str) -> ProcessScript:
        for item in self.processes:
            if item.name == name:
                return item
        raise KeyError(name)

    def render(self) -> str:
        header = f"-- ToolBus script extracted from {self.name}\n"
        return header + "".join(f"\n{render_process_script(p)}" for p in self.processes)


# --- анализ ----------------------------------------------------------------------


def _mentions(term: Process, name: str) -> bool:
    return any(call.name == name for call in iter_calls(term))


def _paths(term: Process, definition: ProcessDef) -> list[Alternative]:
    """Альтернативы терма: охраны в начале, тело, хвостовой вызов."""
    name = definition.name
    if not _mentions(term, name):
        if isinstance(term, Alt):
            return [a for item in flatten(term, Alt) for a in _paths(item, definition)]
        if isinstance(term, Guard):
            return [
                Alternative((term.cond, *a.guards), a.body, a.updates, a.continues)
                for a in _paths(term.then, definition)
            ]
        return [Alternative(body=term, continues=False)]

    if isinstance(term, Call):
        if len(term.args) != len(definition.formals):
            raise NonTailRecursion(name, f"call {render_process(term)} changes arity")
        updates = tuple(
            (f.name, arg) for f, arg in zip(definition.formals, term.args) if arg != Var(f.name)
        )
        return [Alternative(updates=updates, continues=True)]
    if isinstance(term, Alt):
        return [a for item in flatten(term, Alt) for a in _paths(item, definition)]
    if isinstance(term, Guard):
        return [
            Alternative((term.cond, *a.guards), a.body, a.updates, a.continues)
            for a in _paths(term.then, definition)
        ]
    if isinstance(term, Seq):
        if _mentions(term.left, name):
            raise NonTailRecursion(name, f"recursive call before '{render_process(term.right)}'")
        out = []
        for alternative in _paths(term.right, definition):
            inner = alternative.body
            for cond in reversed(alternative.guards):
                inner = Guard(cond, inner if inner is not None else Skip())
            body = term.left if inner is None else Seq(term.left, inner)
            out.append(Alternative((), body, alternative.updates, alternative.continues))
        return out
    if isinstance(term, Star):
        raise NonTailRecursion(name, f"recursive call under iteration '{render_process(term)}'")
    if isinstance(term, Par):
        raise NonTailRecursion(name, f"recursive call under merge '{render_process(term)}'")
    raise NonTailRecursion(name, render_process(term))


def script_of(definitions: dict[tuple[str, int], ProcessDef], name: str) -> ProcessScript:
    """Скрипт одного процесса.

    ``X = X(init)`` разворачивается в определение ``X(formals)`` с начальными
    значениями переменных; ``body * exit`` - цикл из альтернатив ``body`` с выходом.

    Raises:
        NonTailRecursion: Рекурсивный вызов не в хвостовой позиции.
    """
    definition = definitions[(name, 0)] if (name, 0) in definitions else next(
        d for k, d in definitions.items() if k[0] == name
    )
    variables: tuple[tuple[str, Term], ...] = ()
    body = definition.body
    if isinstance(body, Call) and body.name == name and (name, len(body.args)) in definitions and body.args:
        target = definitions[(name, len(body.args))]
        variables = tuple((f.name, evaluate(a)) for f, a in zip(target.formals, body.args))
        definition, body = target, target.body

    if isinstance(body, Star):
        if _mentions(body.body, definition.name):
            raise NonTailRecursion(definition.name, f"recursive call under iteration '{render_process(body)}'")
        alternatives = [Alternative(body=item) for item in flatten(body.body, Alt)]
        if not isinstance(body.exit, Delta):
            alternatives.extend(_paths(body.exit, definition))
    else:
        alternatives = _paths(body, definition)
    return ProcessScript(name, variables, tuple(alternatives))


def stub_script(name: str, error: NonTailRecursion) -> ProcessScript:
    logger.warning("Скрипт %s не извлечен: %s", name, error.message)
    return ProcessScript(name, stub=error.message)


# --- вывод -----------------------------------------------------------------------

_PRIM, _SEQ, _STAR, _ALT = 4, 3, 2, 1


def script_term(term: Term) -> str:
    """Терм данных в записи скрипта: числа, ``+ 1``/``- 1``, без обертки ``tbterm``."""
    if isinstance(term, Var):
        return term.name
    if not isinstance(term, DataTerm):
        return str(term)
    number = to_int(term)
    if number is not None:
        return str(number)
    if term.name in ("tbterm", "nat") and len(term.args) == 1:
        return script_term(term.args[0])
    if term.name == "succ" and len(term.args) == 1:
        return f"{script_term(term.args[0])} + 1"
    if term.name == "pred" and len(term.args) == 1:
        return f"{script_term(term.args[0])} - 1"
    if term.name == "gt" and len(term.args) == 2:
        return f"{script_term(term.args[0])} > {script_term(term.args[1])}"
    if not term.args:
        return term.name
    return f"{term.name}({', '.join(script_term(a) for a in term.args)})"


def script_guard(cond: GuardExpr) -> str:
    if cond.rhs == TRUE and isinstance(cond.lhs, DataTerm) and cond.lhs.name == "gt":
        return script_term(cond.lhs)
    if cond.rhs == FALSE and isinstance(cond.lhs, DataTerm) and cond.lhs.name == "gt":
        return f"not ({script_term(cond.lhs)})"
    return f"{script_term(cond.lhs)} == {script_term(cond.rhs)}"


def script_action(label: ActionLabel) -> str:
    name = SCRIPT_PRIMITIVES.get(label.name, label.name)
    payload = label.payload
    if isinstance(payload, Msg):
        parts = [script_term(payload.source), script_term(payload.target), script_term(payload.term), MODULE_SLOT]
        return f"{name}({', '.join(parts)})"
    if isinstance(payload, ToolSide):
        if label.name.startswith("tooltb-"):
            return f"{name}({script_term(payload.term)})"
        return f"{name}({script_term(payload.tool)}, {script_term(payload.term)})"
    if isinstance(payload, TermPayload):
        return f"{name}({script_term(payload.term)})"
    if payload is None:
        return name
    return f"{name}({', '.join(script_term(t) for t in label.terms())})"


def _level(term: Process) -> int:
    if isinstance(term, Alt):
        return _ALT
    if isinstance(term, Star):
        return _STAR
    if isinstance(term, (Seq, Guard)):
        return _SEQ
    return _PRIM


def _operand(term: Process, minimum: int) -> str:
    text = script_body(term)
    return f"({text})" if _level(term) < minimum else text


def script_body(term: Process) -> str:
    if isinstance(term, Action):
        return script_action(term.label)
    if isinstance(term, Seq):
        return f"{_operand(term.left, _PRIM)} . {_operand(term.right, _SEQ)}"
    if isinstance(term, Alt):
        return " + ".join(_operand(t, _STAR) for t in flatten(term, Alt))
    if isinstance(term, Star):
        return f"{_operand(term.body, _PRIM)} * {_operand(term.exit, _SEQ)}"
    if isinstance(term, Guard):
        return f"[{script_guard(term.cond)}] -> {_operand(term.then, _SEQ)}"
    if isinstance(term, Call):
        if not term.args:
            return term.name
        return f"{term.name}({', '.join(script_term(a) for a in term.args)})"
    if isinstance(term, Skip):
        return "skip"
    return "delta"


def render_alternative(alternative: Alternative) -> str:
    parts = []
    if alternative.body is not None:
        parts.append(_operand(alternative.body, _SEQ))
    parts.extend(f"{var} := {script_term(value)}" for var, value in alternative.updates)
    text = " . ".join(parts) if parts else "skip"
    if alternative.guards:
        text = " ".join(f"[{script_guard(g)}] ->" for g in alternative.guards) + f" {text}"
    return text


def render_process_script(script: ProcessScript) -> str:
    """Блок ``process NAME is ... end NAME``."""
    if script.stub is not None:
        return (
            f"-- process {script.name}: not extracted\n"
            f"-- {script.stub}\n"
        )
    lines = [f"process {script.name} is"]
    lines.extend(f"  var {var} := {script_term(value)}" for var, value in script.variables)
    looping = [a for a in script.alternatives if a.continues]
    ending = [a for a in script.alternatives if not a.continues]
    if looping:
        lines.append("  repeat")
        lines.extend(_alternative_lines(looping))
        lines.append("  until" if ending else "  endrepeat")
    lines.extend(_alternative_lines(ending))
    lines.append(f"end {script.name}")
    return "\n".join(lines) + "\n"


def _alternative_lines(alternatives: list[Alternative]) -> list[str]:
    return [f"    {'  ' if i == 0 else '+ '}{render_alternative(a)}" for i, a in enumerate(alternatives)]


# --- извлечение ------------------------------------------------------------------


def _alias_targets(definitions: dict[tuple[str, int], ProcessDef]) -> set[tuple[str, int]]:
    out = set()
    for (name, arity), definition in definitions.items():
        body = definition.body
        if arity == 0 and isinstance(body, Call) and body.name == name and body.args:
            out.add((name, len(body.args)))
    return out


def extract_model(app: ToolBusApplication) -> ScriptModel:
    """Модель скриптов для сторон шины и инструментов всех компонент приложения."""
    definitions = app.flat.defs
    folded = _alias_targets(definitions)
    model = ScriptModel(app.root)
    for component in app.components:
        for definition in (component.bus, *component.helpers, component.tool):
            if definition.key in folded or any(p.name == definition.name for p in model.processes):
                continue
            try:
                model.processes.append(script_of(definitions, definition.name))
            except NonTailRecursion as exc:
                model.processes.append(stub_script(definition.name, exc))
    logger.info(
        "Извлечено скриптов %d (заглушек %d)",
        len(model.processes),
        sum(1 for p in model.processes if p.stub is not None),
    )
    return model


def extract_script(app: ToolBusApplication) -> str:
    """Текст ``.tbs`` для собранного приложения."""
    return extract_model(app).render()
