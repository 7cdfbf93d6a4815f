"""Симуляция: выбор одного перехода за шаг по политике, воспроизведение трасс."""

from __future__ import annotations

import random
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Protocol

from psfcoord.errors import InvalidChoice
from psfcoord.semantics.actions import ActionLabel
from psfcoord.semantics.canonical import Configuration, Transition
from psfcoord.semantics.sos import is_final
from psfcoord.utils.log_config import get_logger


logger = get_logger(__name__)

TERMINATED = "terminated"
DEADLOCKED = "deadlocked"
BOUND_REACHED = "bound-reached"


@dataclass
class Trace:
    """Трасса симуляции.

    Attributes:
        labels: Метки выполненных переходов.
        status: ``terminated`` | ``deadlocked`` | ``bound-reached``.
        states: Идентификаторы посещенных состояний (на одно больше, чем меток).
    """

    labels: list[ActionLabel] = field(default_factory=list)
    status: str = BOUND_REACHED
    states: list[str] = field(default_factory=list)

    def rendered(self) -> list[str]:
        return [label.render() for label in self.labels]


class Policy(Protocol):
    def choose(self, transitions: Sequence[Transition], step: int) -> int | None:
        """Индекс выбранного перехода или ``None`` (остановить симуляцию)."""


class FirstEnabled:
    """Первый разрешенный переход в порядке записи термов."""

    name = "first-enabled"

    def choose(self, transitions: Sequence[Transition], step: int) -> int | None:
        return 0


class SeededRandom:
    """Равновероятный выбор; одинаковое зерно дает одинаковую трассу."""

    name = "seeded-random"

    def __init__(self, seed: int):
        self.seed = seed
        self._rng = random.Random(seed)

    def choose(self, transitions: Sequence[Transition], step: int) -> int | None:
        return self._rng.randrange(len(transitions))


class Scripted:
    """Переходы по списку: элемент совпадает с записью метки целиком или с ее именем.

    Когда список исчерпан, симуляция останавливается.
    """

    name = "scripted"

    def __init__(self, script: Sequence[str]):
        self.script = list(script)

    def choose(self, transitions: Sequence[Transition], step: int) -> int | None:
        if step >= len(self.script):
            return None
        wanted = self.script[step]
        for i, transition in enumerate(transitions):
            if transition.label.render() == wanted or transition.label.name == wanted:
                return i
        raise InvalidChoice(wanted)


def final_status(config: Configuration, transitions: Sequence[Transition]) -> str:
    if transitions:
        return BOUND_REACHED
    return TERMINATED if is_final(config) else DEADLOCKED


def simulate(root: Configuration, policy: Policy, max_steps: int) -> Trace:
    """Выполнить не больше ``max_steps`` шагов, выбирая переход политикой.

    Args:
        root: Начальная конфигурация.
        policy: Политика выбора перехода.
        max_steps: Граница числа шагов.

    Returns:
        Трасса со статусом завершения.
    """
    config = root
    trace = Trace(states=[config.state_id()])
    for step in range(max_steps):
        transitions = config.enabled()
        if not transitions:
            trace.status = final_status(config, transitions)
            return trace
        choice = policy.choose(transitions, step)
        if choice is None:
            trace.status = BOUND_REACHED
            return trace
        chosen = transitions[choice]
        trace.labels.append(chosen.label)
        config = chosen.target
        trace.states.append(config.state_id())

    trace.status = final_status(config, config.enabled())
    logger.debug("Симуляция: шагов %d, статус %s", len(trace.labels), trace.status)
    return trace


def replay(root: Configuration, labels: Sequence[ActionLabel]) -> list[frozenset[Configuration]]:
    """Воспроизвести метки от начальной конфигурации.

    Возвращает множества конфигураций после каждого шага (первое - ``{root}``).

    Raises:
        InvalidChoice: Метка не разрешена ни в одной из текущих конфигураций.
    """
    current = frozenset({root})
    visited = [current]
    for label in labels:
        current = frozenset(t.target for config in current for t in config.enabled() if t.label == label)
        if not current:
            raise InvalidChoice(label.render())
        visited.append(current)
    return visited


def replays(root: Configuration, trace: Trace) -> bool:
    try:
        replay(root, trace.labels)
    except InvalidChoice:
        return False
    return True


def make_policy(name: str, seed: int = 42, script: Sequence[str] = ()) -> Policy:
    """Политика по имени: ``first-enabled``, ``seeded-random`` или ``scripted``."""
    if name == FirstEnabled.name:
        return FirstEnabled()
    if name == SeededRandom.name:
        return SeededRandom(seed)
    if name == Scripted.name:
        return Scripted(script)
    raise ValueError(f"unknown policy: {name}")
