"""Построение LTS обходом в ширину, поиск дедлоков, обратная достижимость.

Нумерация состояний детерминирована: состояния нумеруются в порядке обнаружения
при обходе слоями, переходы каждого состояния - в порядке ``enabled()``.
При ``workers > 1`` переходы слоя вычисляются в пуле потоков, а слияние идет
последовательно в том же порядке, поэтому результат совпадает с однопоточным.
"""

from __future__ import annotations

from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import networkx as nx

from psfcoord.semantics.actions import SYSTEM_TERMINATED, ActionLabel
from psfcoord.semantics.canonical import Configuration
from psfcoord.semantics.sos import is_final
from psfcoord.utils.log_config import get_logger


logger = get_logger(__name__)


@dataclass(frozen=True)
class ExploreBounds:
    max_states: int = 100_000
    max_depth: int = 10_000
    max_transitions: int = 1_000_000

    def __post_init__(self) -> None:
        for name in ("max_states", "max_depth", "max_transitions"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class LTS:
    """Помеченная система переходов.

    Attributes:
        states: Конфигурации по индексам.
        transitions: Тройки (источник, метка, цель).
        initial: Индекс начального состояния.
        frontier_exhausted: Обход завершен без срабатывания границ.
        expanded: Индексы состояний, чьи переходы вычислены полностью.
    """

    states: list[Configuration] = field(default_factory=list)
    transitions: list[tuple[int, ActionLabel, int]] = field(default_factory=list)
    initial: int = 0
    frontier_exhausted: bool = True
    expanded: set[int] = field(default_factory=set)

    def outgoing(self, state: int) -> list[tuple[int, ActionLabel, int]]:
        return [t for t in self.transitions if t[0] == state]

    def labels(self) -> list[ActionLabel]:
        return [label for _, label, _ in self.transitions]

    def to_graph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(len(self.states)))
        for source, label, target in self.transitions:
            graph.add_edge(source, target, label=label.render())
        return graph


def explore(root: Configuration, bounds: ExploreBounds | None = None, workers: int = 1) -> LTS:
    """Обход пространства состояний в ширину с дедупликацией по канонической форме.

    Args:
        root: Начальная конфигурация.
        bounds: Границы (состояния, глубина, переходы).
        workers: Число потоков для вычисления переходов слоя.

    Returns:
        LTS; ``frontier_exhausted`` ложно, если сработала хотя бы одна граница.

    Raises:
        RecursionFuseBlown: Неохраняемая рекурсия в определениях.
    """
    bounds = bounds or ExploreBounds()
    lts = LTS(states=[root])
    index: dict[Configuration, int] = {root: 0}
    depth = [0]
    frontier = [0]
    stopped = False

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while frontier and not stopped:
            layer = [i for i in frontier if depth[i] < bounds.max_depth]
            if len(layer) < len(frontier):
                lts.frontier_exhausted = False
            frontier = []

            configs = [lts.states[i] for i in layer]
            if pool is not None:
                results = list(pool.map(Configuration.enabled, configs))
            else:
                results = [c.enabled() for c in configs]

            for source, transitions in zip(layer, results):
                if len(lts.transitions) + len(transitions) > bounds.max_transitions:
                    stopped = True
                    break
                complete = True
                for transition in transitions:
                    target = index.get(transition.target)
                    if target is None:
                        if len(lts.states) >= bounds.max_states:
                            stopped = True
                            complete = False
                            break
                        target = len(lts.states)
                        index[transition.target] = target
                        lts.states.append(transition.target)
                        depth.append(depth[source] + 1)
                        frontier.append(target)
                    lts.transitions.append((source, transition.label, target))
                if complete:
                    lts.expanded.add(source)
                if stopped:
                    break
            logger.debug("Слой обработан: состояний %d, переходов %d", len(lts.states), len(lts.transitions))
    finally:
        if pool is not None:
            pool.shutdown()

    if stopped or frontier:
        lts.frontier_exhausted = False
    logger.info(
        "Исследовано состояний: %d, переходов: %d, фронт исчерпан: %s",
        len(lts.states),
        len(lts.transitions),
        lts.frontier_exhausted,
    )
    return lts


def deadlocks(lts: LTS) -> list[int]:
    """Полностью раскрытые состояния без переходов, кроме завершенных и остановленных.

    При неисчерпанном фронте результат - нижняя оценка (пишется предупреждение).
    """
    if not lts.frontier_exhausted:
        logger.warning("Исследование неполное: список дедлоков - нижняя оценка")
    sources = {source for source, _, _ in lts.transitions}
    return [
        i for i in sorted(lts.expanded) if i not in sources and not is_final(lts.states[i])
    ]


def can_reach(lts: LTS, targets: Iterable[int]) -> set[int]:
    """Состояния, из которых достижимо хотя бы одно состояние из ``targets``."""
    graph = lts.to_graph()
    reached: set[int] = set()
    for target in targets:
        if target in reached:
            continue
        reached.add(target)
        reached |= nx.ancestors(graph, target)
    return reached


def shutdown_states(lts: LTS) -> set[int]:
    """Состояния, в которые ведет ``system-terminated``."""
    return {target for _, label, target in lts.transitions if label.name == SYSTEM_TERMINATED}


def unexpanded(lts: LTS) -> set[int]:
    return set(range(len(lts.states))) - lts.expanded
