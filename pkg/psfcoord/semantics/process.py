"""Термы процессов.

Иерархия неизменяемых узлов: ``Delta``, ``Action``, ``Seq``, ``Alt``, ``Par``,
``Star`` (бинарная итерация ``x * y``), ``Guard`` (``[c] -> P``), ``Call``.
``Skip`` и ``Halt`` в исходных текстах не встречаются: это маркеры успешного
завершения и состояния после ``system-terminated``.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass
from typing import Union

from psfcoord.data.terms import DataTerm, GuardExpr, Term, Var, render_term, substitute_term
from psfcoord.semantics.actions import ActionLabel


@dataclass(frozen=True, slots=True)
class Delta:
    def __str__(self) -> str:
        return "delta"


@dataclass(frozen=True, slots=True)
class Skip:
    def __str__(self) -> str:
        return "<terminated>"


@dataclass(frozen=True, slots=True)
class Halt:
    def __str__(self) -> str:
        return "<halted>"


@dataclass(frozen=True, slots=True)
class Action:
    label: ActionLabel


@dataclass(frozen=True, slots=True)
class Seq:
    left: Process
    right: Process


@dataclass(frozen=True, slots=True)
class Alt:
    left: Process
    right: Process


@dataclass(frozen=True, slots=True)
class Par:
    left: Process
    right: Process


@dataclass(frozen=True, slots=True)
class Star:
    body: Process
    exit: Process


@dataclass(frozen=True, slots=True)
class Guard:
    cond: GuardExpr
    then: Process


@dataclass(frozen=True, slots=True)
class Call:
    name: str
    args: tuple[Term, ...] = ()

    @property
    def key(self) -> tuple[str, int]:
        return (self.name, len(self.args))


Process = Union[Delta, Skip, Halt, Action, Seq, Alt, Par, Star, Guard, Call]

DELTA = Delta()
SKIP = Skip()
HALT = Halt()


def seq(left: Process, right: Process) -> Process:
    """Последовательная композиция с продвижением через завершенную левую часть."""
    if isinstance(left, Skip):
        return right
    return Seq(left, right)


def par(left: Process, right: Process) -> Process:
    """Параллельная композиция; завершенная сторона выбрасывается."""
    if isinstance(left, Skip):
        return right
    if isinstance(right, Skip):
        return left
    return Par(left, right)


def alt_of(items: list[Process]) -> Process:
    """Правовложенная альтернатива из непустого списка."""
    result = items[-1]
    for item in reversed(items[:-1]):
        result = Alt(item, result)
    return result


def par_of(items: list[Process]) -> Process:
    """Левовложенное слияние (так его строит парсер); пустой список - ``Skip``."""
    if not items:
        return SKIP
    result = items[0]
    for item in items[1:]:
        result = Par(result, item)
    return result


def seq_of(items: list[Process]) -> Process:
    result = items[-1]
    for item in reversed(items[:-1]):
        result = Seq(item, result)
    return result


def flatten(term: Process, kind: type) -> list[Process]:
    """Операнды цепочки одного бинарного оператора (``Alt`` или ``Par``)."""
    if isinstance(term, kind):
        return flatten(term.left, kind) + flatten(term.right, kind)
    return [term]


# --- обходы -------------------------------------------------------------------------


def children(term: Process) -> tuple[Process, ...]:
    if isinstance(term, (Seq, Alt, Par)):
        return (term.left, term.right)
    if isinstance(term, Star):
        return (term.body, term.exit)
    if isinstance(term, Guard):
        return (term.then,)
    return ()


def iter_nodes(term: Process) -> Iterator[Process]:
    stack = [term]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def iter_actions(term: Process) -> Iterator[ActionLabel]:
    for node in iter_nodes(term):
        if isinstance(node, Action):
            yield node.label


def iter_calls(term: Process) -> Iterator[Call]:
    for node in iter_nodes(term):
        if isinstance(node, Call):
            yield node


def map_process(term: Process, fn: Callable[[Process], Process | None]) -> Process:
    """Восходящая перестройка: ``fn`` может заменить лист (или вернуть ``None``)."""
    replaced = fn(term)
    if replaced is not None:
        return replaced
    if isinstance(term, Seq):
        return Seq(map_process(term.left, fn), map_process(term.right, fn))
    if isinstance(term, Alt):
        return Alt(map_process(term.left, fn), map_process(term.right, fn))
    if isinstance(term, Par):
        return Par(map_process(term.left, fn), map_process(term.right, fn))
    if isinstance(term, Star):
        return Star(map_process(term.body, fn), map_process(term.exit, fn))
    if isinstance(term, Guard):
        return Guard(term.cond, map_process(term.then, fn))
    return term


def map_actions(term: Process, fn: Callable[[ActionLabel], Process]) -> Process:
    """Заменить каждое действие результатом ``fn`` (остальная структура сохраняется)."""
    return map_process(term, lambda node: fn(node.label) if isinstance(node, Action) else None)


def rename_calls(term: Process, renaming: Mapping[str, str]) -> Process:
    return map_process(
        term,
        lambda node: Call(renaming.get(node.name, node.name), node.args) if isinstance(node, Call) else None,
    )


def skeleton(term: Process) -> Process:
    """Терм со стертыми действиями: все ``Action`` заменены на ``delta``."""
    return map_actions(term, lambda _label: DELTA)


def free_vars_term(term: Term) -> set[str]:
    if isinstance(term, Var):
        return {term.name}
    if isinstance(term, DataTerm):
        out: set[str] = set()
        for arg in term.args:
            out |= free_vars_term(arg)
        return out
    return set()


def free_vars(term: Process) -> set[str]:
    out: set[str] = set()
    for node in iter_nodes(term):
        if isinstance(node, Action):
            for item in node.label.terms():
                out |= free_vars_term(item)
        elif isinstance(node, Call):
            for arg in node.args:
                out |= free_vars_term(arg)
        elif isinstance(node, Guard):
            out |= free_vars_term(node.cond.lhs) | free_vars_term(node.cond.rhs)
    return out


def substitute_process(term: Process, env: Mapping[str, Term]) -> Process:
    """Подстановка данных в терм процесса (подстановка без захвата: связывателей нет)."""
    if not env and not free_vars(term):
        return term

    def visit(node: Process) -> Process | None:
        if isinstance(node, Action):
            return Action(node.label.map_terms(lambda t: substitute_term(t, env)))
        if isinstance(node, Call):
            return Call(node.name, tuple(substitute_term(a, env) for a in node.args))
        if isinstance(node, Guard):
            cond = GuardExpr(substitute_term(node.cond.lhs, env), substitute_term(node.cond.rhs, env))
            return Guard(cond, map_process(node.then, visit))
        return None

    return map_process(term, visit)


# --- печать -------------------------------------------------------------------------

LEVEL_PAR, LEVEL_ALT, LEVEL_STAR, LEVEL_SEQ, LEVEL_PRIM = range(5)


def level(term: Process) -> int:
    if isinstance(term, Par):
        return LEVEL_PAR
    if isinstance(term, Alt):
        return LEVEL_ALT
    if isinstance(term, Star):
        return LEVEL_STAR
    if isinstance(term, (Seq, Guard)):
        return LEVEL_SEQ
    return LEVEL_PRIM


def render_operand(term: Process, minimum: int) -> str:
    text = render_process(term)
    return f"({text})" if level(term) < minimum else text


def render_call(call: Call) -> str:
    if not call.args:
        return call.name
    return f"{call.name}({', '.join(render_term(a) for a in call.args)})"


def render_process(term: Process) -> str:
    """Однострочная запись терма; повторный разбор дает тот же терм."""
    if isinstance(term, Action):
        return term.label.render()
    if isinstance(term, Call):
        return render_call(term)
    if isinstance(term, Par):
        return f"{render_operand(term.left, LEVEL_PAR)} || {render_operand(term.right, LEVEL_ALT)}"
    if isinstance(term, Alt):
        return f"{render_operand(term.left, LEVEL_ALT)} + {render_operand(term.right, LEVEL_STAR)}"
    if isinstance(term, Star):
        return f"{render_operand(term.body, LEVEL_STAR)} * {render_operand(term.exit, LEVEL_SEQ)}"
    if isinstance(term, Seq):
        return f"{render_operand(term.left, LEVEL_PRIM)} . {render_operand(term.right, LEVEL_SEQ)}"
    if isinstance(term, Guard):
        return f"{term.cond} -> {render_operand(term.then, LEVEL_SEQ)}"
    return str(term)
