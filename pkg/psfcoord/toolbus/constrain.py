"""Горизонтальная реализация: ограничение процесса ToolBus спецификацией инструмента.

``PT-X = PX || TX``: действия инструмента (``tooltb-*``) при композиции получают
идентификатор инструмента, а обе стороны - владельца ``X``. Внутри окружения
ToolBus tool-пары синхронизируются только с совпадающими инструментом и владельцем.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from psfcoord.data.terms import DataTerm, Term
from psfcoord.errors import MixedVocabulary
from psfcoord.lang.ast import ProcessDef
from psfcoord.refine.refine import NAMING
from psfcoord.semantics.actions import (
    ARCH_PRIMITIVES,
    ActionLabel,
    TermPayload,
    ToolSide,
    is_bus_primitive,
    is_tool_primitive,
)
from psfcoord.semantics.process import (
    DELTA,
    Action,
    Call,
    Par,
    Process,
    Star,
    alt_of,
    free_vars_term,
    iter_actions,
    map_actions,
)
from psfcoord.utils.log_config import get_logger


logger = get_logger(__name__)

#: Действие шины -> двойственное действие инструмента
TOOL_DUALS = {
    "tb-rec-event": "tooltb-snd-event",
    "tb-snd-ack-event": "tooltb-rec-ack-event",
    "tb-snd-do": "tooltb-rec",
    "tb-snd-eval": "tooltb-rec",
    "tb-rec-value": "tooltb-snd-value",
}


@dataclass(frozen=True)
class ConstrainedComponent:
    """Компонента приложения ``PT-X = PX || TX``.

    Attributes:
        name: Имя ``PT-X``.
        bus: Главное определение стороны шины (``PX``), уже с владельцем.
        tool: Главное определение инструмента (``TX``), уже с владельцем и идентификатором.
        tool_id: Идентификатор инструмента.
        helpers: Вспомогательные определения, достижимые из ``bus``/``tool`` (тоже помеченные).
    """

    name: str
    bus: ProcessDef
    tool: ProcessDef
    tool_id: Term
    helpers: tuple[ProcessDef, ...] = field(default=())

    @property
    def component(self) -> str:
        return NAMING.component_of(self.name)

    @property
    def composition(self) -> Process:
        return Par(Call(self.bus.name), Call(self.tool.name))

    def definition(self) -> ProcessDef:
        return ProcessDef(self.name, (), self.composition)

    def definitions(self) -> tuple[ProcessDef, ...]:
        return (self.definition(), self.bus, self.tool, *self.helpers)


def check_bus_vocabulary(definition: ProcessDef) -> None:
    """Сторона шины: только tb-* и свободные атомы."""
    for label in iter_actions(definition.body):
        if is_tool_primitive(label.name) or label.name in ARCH_PRIMITIVES:
            raise MixedVocabulary(definition.name, label.render())


def check_tool_vocabulary(definition: ProcessDef) -> None:
    """Сторона инструмента: только tooltb-* и свободные атомы."""
    for label in iter_actions(definition.body):
        if is_bus_primitive(label.name) or label.name in ARCH_PRIMITIVES:
            raise MixedVocabulary(definition.name, label.render())


def infer_tool_id(bus: Iterable[ProcessDef], component: str) -> Term:
    """Первый идентификатор инструмента, к которому обращается сторона шины.

    Если обращений нет, берется имя компоненты в верхнем регистре.
    """
    for definition in bus:
        for label in iter_actions(definition.body):
            if label.name in TOOL_DUALS and isinstance(label.payload, ToolSide):
                return label.payload.tool
    return DataTerm(component.upper().replace("-", ""))


def tag_bus(definition: ProcessDef, owner: str) -> ProcessDef:
    def tag(label: ActionLabel) -> Process:
        if label.name in TOOL_DUALS:
            return Action(label.with_owner(owner))
        return Action(label)

    return ProcessDef(definition.name, definition.formals, map_actions(definition.body, tag), definition.pos)


def tag_tool(definition: ProcessDef, tool_id: Term, owner: str) -> ProcessDef:
    def tag(label: ActionLabel) -> Process:
        if not is_tool_primitive(label.name):
            return Action(label)
        payload = label.payload
        if isinstance(payload, TermPayload):
            payload = ToolSide(tool_id, payload.term)
        return Action(ActionLabel(label.name, payload, owner))

    return ProcessDef(definition.name, definition.formals, map_actions(definition.body, tag), definition.pos)


def constrain(
    bus: ProcessDef,
    tool: ProcessDef,
    tool_id: Term | str | None = None,
    bus_helpers: Sequence[ProcessDef] = (),
    tool_helpers: Sequence[ProcessDef] = (),
    name: str | None = None,
) -> ConstrainedComponent:
    """Поставить процесс шины параллельно с процессом инструмента.

    Args:
        bus: Процесс ToolBus (``PX``).
        tool: Процесс инструмента (``TX``).
        tool_id: Идентификатор инструмента; по умолчанию выводится из ``bus``.
        bus_helpers: Определения, вызываемые из ``bus`` (``PEventsEditorManager``...).
        tool_helpers: Определения, вызываемые из ``tool`` (``TEditorManager(n)``...).
        name: Имя композиции; по умолчанию ``PT-<компонента>``.

    Raises:
        MixedVocabulary: Сторона использует примитивы другой стороны.
    """
    component = NAMING.component_of(bus.name)
    for definition in (bus, *bus_helpers):
        check_bus_vocabulary(definition)
    for definition in (tool, *tool_helpers):
        check_tool_vocabulary(definition)

    if isinstance(tool_id, str):
        tool_id = DataTerm(tool_id)
    if tool_id is None:
        tool_id = infer_tool_id((bus, *bus_helpers), component)

    helpers = tuple(tag_bus(d, component) for d in bus_helpers) + tuple(
        tag_tool(d, tool_id, component) for d in tool_helpers
    )
    constrained = ConstrainedComponent(
        name=name or NAMING.constrained_name(component),
        bus=tag_bus(bus, component),
        tool=tag_tool(tool, tool_id, component),
        tool_id=tool_id,
        helpers=helpers,
    )
    logger.debug("Ограничение %s: инструмент %s", constrained.name, tool_id)
    return constrained


def tool_stub(bus: Sequence[ProcessDef], name: str | None = None) -> ProcessDef:
    """Разрешающий инструмент: в цикле принимает любое двойственное действие шины.

    Действия заглушки сразу несут идентификатор инструмента из действия шины.

    Действия с переменными данных пропускаются (их двойственные нельзя записать
    без параметров).
    """
    if not bus:
        raise ValueError("tool_stub needs at least one bus definition")
    component = NAMING.component_of(bus[0].name)
    duals: list[ActionLabel] = []
    for definition in bus:
        for label in iter_actions(definition.body):
            if label.name not in TOOL_DUALS or not isinstance(label.payload, ToolSide):
                continue
            if free_vars_term(label.payload.tool) or free_vars_term(label.payload.term):
                logger.debug("Заглушка %s: пропущено %s", component, label.render())
                continue
            dual = ActionLabel(TOOL_DUALS[label.name], label.payload)
            if dual not in duals:
                duals.append(dual)
    stub_name = name or NAMING.tool_name(component)
    body = Star(alt_of([Action(d) for d in duals]), DELTA) if duals else DELTA
    return ProcessDef(stub_name, (), body)
