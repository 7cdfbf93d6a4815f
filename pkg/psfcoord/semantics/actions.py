"""Метки действий, полезные нагрузки и таблица коммуникаций.

Метка действия - имя плюс необязательная нагрузка:

* ``Conn`` - соединение архитектуры ``snd(a >> b, t)`` / ``rec(a >> b, t)``;
* ``Msg`` - сообщение между процессами ToolBus ``tb-snd-msg(a, b, t)``;
* ``ToolSide`` - обращение к инструменту ``tb-snd-do(TOOL, t)``, а также
  tooltb-действия после привязки к инструменту;
* ``TermPayload`` - tooltb-действие до привязки ``tooltb-rec(t)``;
* ``Args`` - аргументы свободного атома.

Коммуникация строго бинарная: пара имен из :data:`COMM_TABLE` с совпадающими
нагрузками дает метку-результат (``comm-*``).
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Union

from psfcoord.data.terms import Term, evaluate, render_term


@dataclass(frozen=True, slots=True)
class Conn:
    source: Term
    target: Term
    term: Term

    def map_terms(self, fn: Callable[[Term], Term]) -> Conn:
        return Conn(fn(self.source), fn(self.target), fn(self.term))

    def render(self) -> str:
        return f"{render_term(self.source)} >> {render_term(self.target)}, {render_term(self.term)}"


@dataclass(frozen=True, slots=True)
class Msg:
    source: Term
    target: Term
    term: Term

    def map_terms(self, fn: Callable[[Term], Term]) -> Msg:
        return Msg(fn(self.source), fn(self.target), fn(self.term))

    def render(self) -> str:
        return f"{render_term(self.source)}, {render_term(self.target)}, {render_term(self.term)}"


@dataclass(frozen=True, slots=True)
class ToolSide:
    tool: Term
    term: Term

    def map_terms(self, fn: Callable[[Term], Term]) -> ToolSide:
        return ToolSide(fn(self.tool), fn(self.term))

    def render(self) -> str:
        return f"{render_term(self.tool)}, {render_term(self.term)}"


@dataclass(frozen=True, slots=True)
class TermPayload:
    term: Term

    def map_terms(self, fn: Callable[[Term], Term]) -> TermPayload:
        return TermPayload(fn(self.term))

    def render(self) -> str:
        return render_term(self.term)


@dataclass(frozen=True, slots=True)
class Args:
    terms: tuple[Term, ...]

    def map_terms(self, fn: Callable[[Term], Term]) -> Args:
        return Args(tuple(fn(t) for t in self.terms))

    def render(self) -> str:
        return ", ".join(render_term(t) for t in self.terms)


Payload = Union[Conn, Msg, ToolSide, TermPayload, Args, None]


@dataclass(frozen=True, slots=True)
class ActionLabel:
    """Метка действия.

    Attributes:
        name: Имя действия (``snd``, ``tb-snd-do``, ``editor-close``, ``comm-msg``...).
        payload: Нагрузка или ``None``.
        owner: Компонент ToolBus-приложения, которому принадлежит действие;
            проставляется при ограничении, для архитектуры всегда ``None``.
        operands: Для результата коммуникации - пара исходных меток;
            в сравнении не участвует.
    """

    name: str
    payload: Payload = None
    owner: str | None = None
    operands: tuple[ActionLabel, ActionLabel] | None = field(default=None, compare=False, repr=False)

    def map_terms(self, fn: Callable[[Term], Term]) -> ActionLabel:
        if self.payload is None:
            return self
        return ActionLabel(self.name, self.payload.map_terms(fn), self.owner, self.operands)

    def evaluated(self) -> ActionLabel:
        return self.map_terms(evaluate)

    def terms(self) -> tuple[Term, ...]:
        """Термы нагрузки в порядке записи."""
        collected: list[Term] = []

        def keep(term: Term) -> Term:
            collected.append(term)
            return term

        self.map_terms(keep)
        return tuple(collected)

    def with_owner(self, owner: str | None) -> ActionLabel:
        return ActionLabel(self.name, self.payload, owner, self.operands)

    def render(self) -> str:
        if self.payload is None:
            return self.name
        return f"{self.name}({self.payload.render()})"

    def render_payload(self) -> str:
        return "" if self.payload is None else self.payload.render()

    def __str__(self) -> str:
        return self.render()


# --- словарь примитивов -------------------------------------------------------------

ARCH_PRIMITIVES = frozenset({"snd", "rec", "snd-quit", "rec-quit"})

TB_PRIMITIVES = frozenset(
    {
        "tb-snd-msg",
        "tb-rec-msg",
        "tb-rec-event",
        "tb-snd-ack-event",
        "tb-snd-do",
        "tb-snd-eval",
        "tb-rec-value",
        "snd-tb-shutdown",
        "tb-rec-shutdown",
    }
)

TOOLTB_PRIMITIVES = frozenset({"tooltb-snd-event", "tooltb-rec-ack-event", "tooltb-rec", "tooltb-snd-value"})

#: Синоним из корпуса; парсер нормализует его в tooltb-snd-value
TOOLTB_ALIASES = {"tooltb-snd": "tooltb-snd-value"}

SYSTEM_TERMINATED = "system-terminated"

#: Имена с фиксированной формой нагрузки
PAYLOAD_KINDS: dict[str, type | None] = {
    "snd": Conn,
    "rec": Conn,
    "snd-quit": None,
    "rec-quit": None,
    "tb-snd-msg": Msg,
    "tb-rec-msg": Msg,
    "tb-rec-event": ToolSide,
    "tb-snd-ack-event": ToolSide,
    "tb-snd-do": ToolSide,
    "tb-snd-eval": ToolSide,
    "tb-rec-value": ToolSide,
    "snd-tb-shutdown": None,
    "tb-rec-shutdown": None,
    "tooltb-snd-event": TermPayload,
    "tooltb-rec-ack-event": TermPayload,
    "tooltb-rec": TermPayload,
    "tooltb-snd-value": TermPayload,
    SYSTEM_TERMINATED: None,
}

PRIMITIVE_NAMES = frozenset(PAYLOAD_KINDS)

ARCH_BLOCKED = ARCH_PRIMITIVES
TOOLBUS_BLOCKED = ARCH_PRIMITIVES | (TB_PRIMITIVES | TOOLTB_PRIMITIVES)


def is_bus_primitive(name: str) -> bool:
    return name in TB_PRIMITIVES


def is_tool_primitive(name: str) -> bool:
    return name in TOOLTB_PRIMITIVES


def is_free_atom(name: str) -> bool:
    return name not in PRIMITIVE_NAMES and not name.startswith("comm-")


# --- коммуникация ------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class CommRule:
    """Строка таблицы коммуникаций.

    ``discipline == "exact"``: нагрузки равны после вычисления.
    ``discipline == "tool"``: обе стороны несут ``ToolSide`` с равными инструментом,
    термом и владельцем; непривязанное tooltb-действие не коммуницирует.
    """

    sender: str
    receiver: str
    result: str
    discipline: str = "exact"


COMM_TABLE: tuple[CommRule, ...] = (
    CommRule("snd", "rec", "comm-snd-rec"),
    CommRule("snd-quit", "rec-quit", "comm-quit"),
    CommRule("tb-snd-msg", "tb-rec-msg", "comm-msg"),
    CommRule("tooltb-snd-event", "tb-rec-event", "comm-event", "tool"),
    CommRule("tb-snd-ack-event", "tooltb-rec-ack-event", "comm-ack-event", "tool"),
    CommRule("tb-snd-do", "tooltb-rec", "comm-do", "tool"),
    CommRule("tb-snd-eval", "tooltb-rec", "comm-eval", "tool"),
    CommRule("tooltb-snd-value", "tb-rec-value", "comm-value", "tool"),
    CommRule("snd-tb-shutdown", "tb-rec-shutdown", "comm-tb-shutdown"),
)

_COMM_INDEX: dict[tuple[str, str], tuple[CommRule, bool]] = {}
for _rule in COMM_TABLE:
    _COMM_INDEX[(_rule.sender, _rule.receiver)] = (_rule, False)
    _COMM_INDEX[(_rule.receiver, _rule.sender)] = (_rule, True)

COMM_RESULTS = frozenset(rule.result for rule in COMM_TABLE)

#: Результат коммуникации -> действие шины ToolBus, из которого он получен
BUS_SIDE_OF_RESULT = {
    rule.result: (rule.receiver if rule.receiver in TB_PRIMITIVES else rule.sender)
    for rule in COMM_TABLE
    if rule.sender in TB_PRIMITIVES or rule.receiver in TB_PRIMITIVES
}


def can_communicate(a: str, b: str) -> bool:
    return (a, b) in _COMM_INDEX


def communicate(a: ActionLabel, b: ActionLabel) -> ActionLabel | None:
    """Результат коммуникации двух меток или ``None``.

    Порядок аргументов не важен. Нагрузки сравниваются в нормальной форме.
    """
    entry = _COMM_INDEX.get((a.name, b.name))
    if entry is None:
        return None
    rule, swapped = entry
    sender, receiver = (b, a) if swapped else (a, b)
    sender, receiver = sender.evaluated(), receiver.evaluated()

    if rule.discipline == "tool":
        if not isinstance(sender.payload, ToolSide) or not isinstance(receiver.payload, ToolSide):
            return None
        if sender.payload != receiver.payload or sender.owner != receiver.owner:
            return None
        return ActionLabel(rule.result, sender.payload, sender.owner, (sender, receiver))

    if sender.payload != receiver.payload:
        return None
    return ActionLabel(rule.result, sender.payload, sender.owner, (sender, receiver))
