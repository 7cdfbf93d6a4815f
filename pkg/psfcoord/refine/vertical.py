"""Проверка вертикальной реализации абстракцией трасс.

Каждая конкретизация правила (абстрактное действие -> последовательность действий
ToolBus) сворачивается обратно в абстрактное действие. Абстрактное действие
фиксируется на элементе синхронизации (``tb-snd-msg``/``tb-rec-msg`` для snd/rec,
``snd-tb-shutdown`` для ``snd-quit``), для остальных действий - на последнем
элементе замены; прочие элементы невидимы. Множества трасс сравниваются
синхронным построением подмножеств до глубины ``k`` абстрактных шагов:
конкретная трасса, оборванная посреди замены, сравнивается по завершенному префиксу.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from psfcoord.errors import AmbiguousAbstraction, ExplorationBoundExceeded
from psfcoord.refine.mapping import MappingTable
from psfcoord.refine.refine import Instantiation
from psfcoord.semantics.actions import SYSTEM_TERMINATED, ActionLabel
from psfcoord.semantics.canonical import Configuration
from psfcoord.semantics.process import iter_actions
from psfcoord.utils.log_config import get_logger


logger = get_logger(__name__)

#: Действие шины -> результат его коммуникации
OBSERVED_AS = {
    "tb-snd-msg": "comm-msg",
    "tb-rec-msg": "comm-msg",
    "tb-rec-event": "comm-event",
    "tb-snd-ack-event": "comm-ack-event",
    "tb-snd-do": "comm-do",
    "tb-snd-eval": "comm-eval",
    "tb-rec-value": "comm-value",
    "snd-tb-shutdown": "comm-tb-shutdown",
}

#: Абстрактный примитив -> результат его коммуникации
ABSTRACT_AS = {"snd": "comm-snd-rec", "rec": "comm-snd-rec", "snd-quit": "comm-quit"}

#: Абстрактный примитив -> элементы замены, на которых он фиксируется
COMMIT_AT = {"snd": ("tb-snd-msg",), "rec": ("tb-rec-msg",), "snd-quit": ("snd-tb-shutdown",)}

MAX_CLOSURE = 100_000


def observed(label: ActionLabel) -> str:
    """Как действие замены выглядит в трассе конкретной системы."""
    label = label.evaluated()
    name = OBSERVED_AS.get(label.name, label.name)
    return ActionLabel(name, label.payload).render()


def abstract_observed(label: ActionLabel) -> str:
    label = label.evaluated()
    return ActionLabel(ABSTRACT_AS.get(label.name, label.name), label.payload).render()


def commit_index(item: Instantiation) -> int:
    names = COMMIT_AT.get(item.abstract.name)
    if names:
        for index, concrete in enumerate(item.concrete):
            if concrete.name in names:
                return index
    return len(item.concrete) - 1


class Abstraction:
    """Отображение видимых меток конкретной системы в абстрактные (``None`` - невидимо)."""

    def __init__(self, instantiations: Iterable[Instantiation]):
        self.table: dict[str, str | None] = {}
        self.sources: dict[str, Instantiation] = {}
        for item in instantiations:
            commit = commit_index(item)
            for index, concrete in enumerate(item.concrete):
                image = abstract_observed(item.abstract) if index == commit else None
                self._put(observed(concrete), image, item)

    def _put(self, key: str, image: str | None, item: Instantiation) -> None:
        if key in self.table and self.table[key] != image:
            other = self.sources[key]
            raise AmbiguousAbstraction(
                f"'{key}' collapses to both '{self.table[key] or 'nothing'}' ({other.component}) "
                f"and '{image or 'nothing'}' ({item.component})"
            )
        self.table[key] = image
        self.sources.setdefault(key, item)

    def __call__(self, label: ActionLabel) -> str | None:
        rendered = label.render()
        if rendered in self.table:
            return self.table[rendered]
        if label.name == SYSTEM_TERMINATED:
            return rendered
        return None


def instantiations_for(abstract: Configuration, table: MappingTable) -> list[Instantiation]:
    """Конкретизации всех действий абстрактных определений по правилам таблицы.

    Компонента действия неизвестна, поэтому пробуются правила каждой компоненты,
    а затем правила по умолчанию.
    """
    found: list[Instantiation] = []
    for definition in abstract.semantics.definitions.values():
        for label in iter_actions(definition.body):
            matches = []
            for component, rules in table.components.items():
                for rule in sorted(rules, key=lambda r: -r.specificity):
                    bindings = rule.match(label)
                    if bindings is not None:
                        matches.append(Instantiation(component, label, rule.instantiate(bindings), rule))
                        break
            if not matches:
                found_default = table.lookup(None, label)
                if found_default is not None:
                    rule, bindings = found_default
                    matches.append(Instantiation("default", label, rule.instantiate(bindings), rule))
            for item in matches:
                if all((i.abstract, i.concrete) != (item.abstract, item.concrete) for i in found):
                    found.append(item)
    return found


@dataclass(frozen=True)
class VerticalVerdict:
    """Итог проверки.

    Attributes:
        equal: Множества трасс совпадают до глубины.
        counterexample: Абстрактная трасса, различающая стороны.
        witness: ``concrete`` - лишнее поведение реализации, ``abstract`` - нет свидетеля.
        depth: Глубина сравнения.
        pairs: Сколько пар подмножеств просмотрено.
    """

    equal: bool
    counterexample: tuple[str, ...] = ()
    witness: str | None = None
    depth: int = 0
    pairs: int = 0

    def render(self) -> str:
        if self.equal:
            return f"equal up to depth {self.depth} ({self.pairs} state pairs)"
        steps = " . ".join(self.counterexample)
        who = "only the refinement" if self.witness == "concrete" else "only the architecture"
        return f"not equal: trace {steps} is possible in {who}"


def _closure(configs: Iterable[Configuration], abstraction: Abstraction) -> frozenset[Configuration]:
    seen = set(configs)
    stack = list(seen)
    while stack:
        config = stack.pop()
        for transition in config.enabled():
            if abstraction(transition.label) is None and transition.target not in seen:
                seen.add(transition.target)
                stack.append(transition.target)
                if len(seen) > MAX_CLOSURE:
                    raise ExplorationBoundExceeded(f"invisible closure exceeds {MAX_CLOSURE} states")
    return frozenset(seen)


def _concrete_moves(states: frozenset[Configuration], abstraction: Abstraction) -> dict[str, frozenset]:
    moves: dict[str, set[Configuration]] = {}
    for config in states:
        for transition in config.enabled():
            image = abstraction(transition.label)
            if image is not None:
                moves.setdefault(image, set()).add(transition.target)
    return {label: _closure(targets, abstraction) for label, targets in moves.items()}


def _abstract_moves(states: frozenset[Configuration]) -> dict[str, frozenset]:
    moves: dict[str, set[Configuration]] = {}
    for config in states:
        for transition in config.enabled():
            moves.setdefault(transition.label.render(), set()).add(transition.target)
    return {label: frozenset(targets) for label, targets in moves.items()}


def check_vertical(
    abstract: Configuration,
    concrete: Configuration,
    table: MappingTable,
    depth: int = 8,
    instantiations: Sequence[Instantiation] | None = None,
) -> VerticalVerdict:
    """Сравнить трассы архитектуры и ее уточнения до глубины ``depth``.

    Args:
        abstract: Конфигурация архитектуры.
        concrete: Конфигурация уточненной системы (обычно с заглушками инструментов).
        table: Таблица, задающая ожидаемое уточнение.
        depth: Число абстрактных шагов.
        instantiations: Отчет аудита; по умолчанию строится по ``table``.

    Raises:
        AmbiguousAbstraction: Одна видимая метка сворачивается по-разному.
    """
    items = list(instantiations) if instantiations is not None else instantiations_for(abstract, table)
    abstraction = Abstraction(items)

    start = (_closure([concrete], abstraction), frozenset([abstract]))
    queue: deque[tuple[tuple[frozenset, frozenset], tuple[str, ...]]] = deque([(start, ())])
    seen = {start}
    with ThreadPoolExecutor(max_workers=2) as pool:
        while queue:
            (concrete_states, abstract_states), trace = queue.popleft()
            if len(trace) >= depth:
                continue
            concrete_future = pool.submit(_concrete_moves, concrete_states, abstraction)
            abstract_future = pool.submit(_abstract_moves, abstract_states)
            concrete_moves, abstract_moves = concrete_future.result(), abstract_future.result()

            extra = sorted(set(concrete_moves) - set(abstract_moves))
            if extra:
                logger.info("Лишнее поведение уточнения после %s: %s", trace, extra[0])
                return VerticalVerdict(False, (*trace, extra[0]), "concrete", depth, len(seen))
            missing = sorted(set(abstract_moves) - set(concrete_moves))
            if missing:
                logger.info("Нет свидетеля уточнения после %s: %s", trace, missing[0])
                return VerticalVerdict(False, (*trace, missing[0]), "abstract", depth, len(seen))

            for label in sorted(concrete_moves):
                pair = (concrete_moves[label], abstract_moves[label])
                if pair not in seen:
                    seen.add(pair)
                    queue.append((pair, (*trace, label)))

    logger.info("Уточнение совпадает до глубины %d (пар %d)", depth, len(seen))
    return VerticalVerdict(True, (), None, depth, len(seen))
