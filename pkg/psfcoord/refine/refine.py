"""Вертикальная реализация: замена абстрактных действий последовательностями ToolBus.

Каждое действие определения заменяется последовательной композицией действий
замены подходящего правила; остальная структура терма (``+``, ``*``, охраны,
вызовы, параметры) сохраняется без изменений. Определения компонент получают
префикс ``P`` (процесс внутри ToolBus), инструменты - ``T``, адаптеры - ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass

from psfcoord.errors import UnmappedAction
from psfcoord.lang.ast import AtomDecl, ProcessDef
from psfcoord.lang.prelude import load_prelude
from psfcoord.lang.resolve import FlatSpec
from psfcoord.refine.mapping import MappingRule, MappingTable
from psfcoord.semantics.actions import ActionLabel, is_free_atom
from psfcoord.semantics.process import Action, Process, iter_actions, map_actions, rename_calls, seq_of
from psfcoord.utils.log_config import get_logger


logger = get_logger(__name__)


@dataclass(frozen=True)
class NamingConvention:
    """Префиксы имен: процесс ToolBus, инструмент, адаптер."""

    bus: str = "P"
    tool: str = "T"
    adapter: str = "A"

    def bus_name(self, name: str) -> str:
        return f"{self.bus}{name}"

    def tool_name(self, name: str) -> str:
        return f"{self.tool}{name}"

    def adapter_name(self, name: str) -> str:
        return f"{self.adapter}{name}"

    def constrained_name(self, name: str) -> str:
        return f"{self.bus}{self.tool}-{name}"

    def component_of(self, name: str) -> str:
        """Имя компоненты по имени ``P``/``T``/``PT-`` процесса."""
        constrained = f"{self.bus}{self.tool}-"
        if name.startswith(constrained):
            return name[len(constrained) :]
        for prefix in (self.bus, self.tool, self.adapter):
            if name.startswith(prefix) and name[len(prefix) : len(prefix) + 1].isupper():
                return name[len(prefix) :]
        return name


NAMING = NamingConvention()


@dataclass(frozen=True)
class Instantiation:
    """Одна конкретизация правила: строка отчета аудита."""

    component: str
    abstract: ActionLabel
    concrete: tuple[ActionLabel, ...]
    rule: MappingRule

    def render(self) -> str:
        concrete = " . ".join(a.render() for a in self.concrete)
        return f"{self.component}\t{self.abstract.render()}\t{concrete}"


def _refine_body(
    definition: ProcessDef,
    table: MappingTable,
    component: str,
    audit: list[Instantiation],
    unmapped: list[tuple[str, str]],
) -> Process:
    def replace(label: ActionLabel) -> Process:
        found = table.lookup(component, label)
        if found is None:
            unmapped.append((component, f"{label.render()} in {definition.name}"))
            return Action(label)
        rule, bindings = found
        concrete = rule.instantiate(bindings)
        item = Instantiation(component, label, concrete, rule)
        if item not in audit:
            audit.append(item)
        return seq_of([Action(c) for c in concrete])

    return map_actions(definition.body, replace)


def refine_process(
    definition: ProcessDef,
    table: MappingTable,
    component: str,
    audit: list[Instantiation] | None = None,
) -> ProcessDef:
    """Уточнить одно определение.

    Имя определения и вызовы внутри тела не меняются; переименование делает
    :func:`refine_system`.

    Raises:
        UnmappedAction: Для действия нет ни правила компоненты, ни правила по умолчанию.
    """
    unmapped: list[tuple[str, str]] = []
    body = _refine_body(definition, table, component, audit if audit is not None else [], unmapped)
    if unmapped:
        logger.error("Действия без правил: %s", unmapped)
        raise UnmappedAction(unmapped)
    return ProcessDef(definition.name, definition.formals, body, definition.pos)


def component_modules(flat: FlatSpec) -> dict[str, list[tuple[str, int]]]:
    """Модули-компоненты: пользовательские модули, определения которых выполняют действия."""
    prelude = {m.name for m in load_prelude().modules}
    grouped: dict[str, list[tuple[str, int]]] = {}
    for key, definition in flat.defs.items():
        module = flat.origins.get(key, definition.name)
        if module in prelude:
            continue
        grouped.setdefault(module, []).append(key)
    return {
        module: keys
        for module, keys in grouped.items()
        if any(next(iter_actions(flat.defs[k].body), None) is not None for k in keys)
    }


def refine_system(
    flat: FlatSpec,
    table: MappingTable,
    audit: list[Instantiation] | None = None,
    naming: NamingConvention = NAMING,
) -> FlatSpec:
    """Уточнить все компоненты архитектуры и переименовать их с префиксом ``P``.

    Модули чистой композиции (``IDESystem``) и определения окружения отбрасываются:
    результат - набор процессов ToolBus без корня, который затем ограничивается
    инструментами и собирается в приложение.

    Args:
        flat: Разрешенная архитектурная спецификация.
        table: Таблица отображения.
        audit: Если передан, дополняется конкретизациями правил в порядке обхода.
        naming: Соглашение об именах.

    Raises:
        UnmappedAction: Сводный список всех действий без правил.
    """
    audit = audit if audit is not None else []
    components = component_modules(flat)
    renaming = {key[0]: naming.bus_name(key[0]) for keys in components.values() for key in keys}

    refined = FlatSpec(functions=dict(flat.functions), sorts=flat.sorts)
    unmapped: list[tuple[str, str]] = []
    for component, keys in components.items():
        for key in keys:
            definition = flat.defs[key]
            body = rename_calls(_refine_body(definition, table, component, audit, unmapped), renaming)
            new = ProcessDef(renaming[definition.name], definition.formals, body, definition.pos)
            refined.defs[new.key] = new
            refined.origins[new.key] = naming.bus_name(component)
    if unmapped:
        logger.error("Действия без правил (%d): %s", len(unmapped), unmapped)
        raise UnmappedAction(unmapped)

    used = {label.name for d in refined.defs.values() for label in iter_actions(d.body)}
    refined.atoms = {
        name: decl for name, decl in flat.atoms.items() if name in used and is_free_atom(name)
    }
    for name in sorted(used - set(refined.atoms)):
        if is_free_atom(name):
            refined.atoms[name] = AtomDecl(name)
    logger.info(
        "Уточнено компонент %d, определений %d, конкретизаций %d",
        len(components),
        len(refined.defs),
        len(audit),
    )
    return refined


def audit_report(audit: list[Instantiation]) -> str:
    """Отчет аудита: строка ``компонента TAB абстрактное TAB конкретная-последовательность``."""
    return "".join(f"{item.render()}\n" for item in audit)
